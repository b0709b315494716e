"""glyphlab: text-guided diffusion super-resolution lab (python bindings)."""

import glob
import importlib.util
import os


def _load_ext():
    ext_dir = os.environ.get("GLYPHLAB_EXT_DIR")
    if ext_dir:
        candidates = sorted(
            glob.glob(os.path.join(ext_dir, "_glyphlab*.so"))
            + glob.glob(os.path.join(ext_dir, "_glyphlab*.pyd"))
        )
        if candidates:
            spec = importlib.util.spec_from_file_location("glyphlab._glyphlab", candidates[0])
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    from . import _glyphlab as mod  # packaged extension

    return mod


_ext = _load_ext()

for _name in dir(_ext):
    if not _name.startswith("_"):
        globals()[_name] = getattr(_ext, _name)

__all__ = [name for name in dir(_ext) if not name.startswith("_")]
__version__ = "0.1.0"
