#include "glyphlab/wordlist.hpp"

namespace glyphlab::corpus {

namespace {

// 1000 common English words, uppercase, 3-8 characters.
const char* kWords[1000] = {
    "THE", "AND", "FOR", "NOT", "WITH", "YOU", "THIS", "HAVE",
    "FROM", "THEY", "SAY", "HER", "SHE", "WILL", "ONE", "ALL",
    "WOULD", "THERE", "THEIR", "WHAT", "OUT", "ABOUT", "WHO", "GET",
    "WHICH", "WHEN", "MAKE", "CAN", "LIKE", "TIME", "JUST", "HIM",
    "KNOW", "TAKE", "PEOPLE", "INTO", "YEAR", "YOUR", "GOOD", "SOME",
    "COULD", "THEM", "SEE", "OTHER", "THAN", "THEN", "NOW", "LOOK",
    "ONLY", "COME", "ITS", "OVER", "THINK", "ALSO", "BACK", "AFTER",
    "USE", "TWO", "HOW", "OUR", "WORK", "FIRST", "WELL", "WAY",
    "EVEN", "NEW", "WANT", "BECAUSE", "ANY", "THESE", "GIVE", "DAY",
    "MOST", "ABLE", "ABOVE", "ACCEPT", "ACCOUNT", "ACROSS", "ACT", "ACTION",
    "ADD", "ADDRESS", "ADMIT", "ADVICE", "AFFECT", "AFFORD", "AGAIN", "AGAINST",
    "AGE", "AGENCY", "AGENT", "AGO", "AGREE", "AHEAD", "AIR", "ALLOW",
    "ALMOST", "ALONE", "ALONG", "ALREADY", "ALWAYS", "AMONG", "AMOUNT", "ANALYSIS",
    "ANIMAL", "ANNOUNCE", "ANNUAL", "ANOTHER", "ANSWER", "ANYONE", "ANYTHING", "APPEAR",
    "APPLY", "APPROACH", "AREA", "ARGUE", "ARM", "AROUND", "ARRIVE", "ART",
    "ARTICLE", "ARTIST", "ASK", "ASSUME", "ATTACK", "ATTEMPT", "ATTEND", "ATTORNEY",
    "AUDIENCE", "AUTHOR", "AVOID", "AWAY", "BABY", "BAD", "BAG", "BALL",
    "BANK", "BAR", "BASE", "BATTLE", "BEAT", "BECOME", "BED", "BEFORE",
    "BEGIN", "BEHAVIOR", "BEHIND", "BELIEVE", "BENEFIT", "BEST", "BETTER", "BETWEEN",
    "BEYOND", "BIG", "BILL", "BILLION", "BIT", "BLACK", "BLOOD", "BLUE",
    "BOARD", "BODY", "BOOK", "BORN", "BOTH", "BOX", "BOY", "BREAK",
    "BRING", "BROTHER", "BUDGET", "BUILD", "BUILDING", "BUSINESS", "BUY", "CALL",
    "CAMERA", "CAMPAIGN", "CANCER", "CAPITAL", "CAR", "CARD", "CARE", "CAREER",
    "CARRY", "CASE", "CATCH", "CAUSE", "CELL", "CENTER", "CENTRAL", "CENTURY",
    "CERTAIN", "CHAIR", "CHANCE", "CHANGE", "CHARGE", "CHECK", "CHILD", "CHOICE",
    "CHOOSE", "CHURCH", "CITIZEN", "CITY", "CIVIL", "CLAIM", "CLASS", "CLEAR",
    "CLEARLY", "CLOSE", "COACH", "COLD", "COLLEGE", "COLOR", "COMMON", "COMPANY",
    "COMPARE", "COMPUTER", "CONCERN", "CONGRESS", "CONSIDER", "CONSUMER", "CONTAIN", "CONTINUE",
    "CONTROL", "COST", "COUNTRY", "COUPLE", "COURSE", "COURT", "COVER", "CREATE",
    "CRIME", "CULTURE", "CUP", "CURRENT", "CUT", "DARK", "DATA", "DAUGHTER",
    "DEAD", "DEAL", "DEATH", "DEBATE", "DECADE", "DECIDE", "DECISION", "DEEP",
    "DEFENSE", "DEGREE", "DEMOCRAT", "DESCRIBE", "DESIGN", "DESPITE", "DETAIL", "DEVELOP",
    "DEVICE", "DIE", "DINNER", "DIRECTOR", "DISCOVER", "DISCUSS", "DISEASE", "DOCTOR",
    "DOG", "DOOR", "DOWN", "DRAW", "DREAM", "DRIVE", "DROP", "DRUG",
    "DURING", "EACH", "EARLY", "EAST", "EASY", "EAT", "ECONOMY", "EDGE",
    "EFFECT", "EFFORT", "EIGHT", "EITHER", "ELECTION", "ELSE", "EMPLOYEE", "END",
    "ENERGY", "ENJOY", "ENOUGH", "ENTER", "ENTIRE", "EVENING", "EVENT", "EVER",
    "EVERY", "EVERYONE", "EVIDENCE", "EXACTLY", "EXAMPLE", "EXIST", "EXPECT", "EXPERT",
    "EXPLAIN", "EYE", "FACE", "FACT", "FACTOR", "FAIL", "FALL", "FAMILY",
    "FAR", "FAST", "FATHER", "FEAR", "FEDERAL", "FEEL", "FEELING", "FEW",
    "FIELD", "FIGHT", "FIGURE", "FILL", "FILM", "FINAL", "FINALLY", "FIND",
    "FINE", "FINGER", "FINISH", "FIRE", "FIRM", "FISH", "FIVE", "FLOOR",
    "FLY", "FOCUS", "FOLLOW", "FOOD", "FOOT", "FORCE", "FOREIGN", "FORGET",
    "FORM", "FORMER", "FORWARD", "FOUR", "FREE", "FRIEND", "FRONT", "FULL",
    "FUND", "FUTURE", "GAME", "GARDEN", "GAS", "GENERAL", "GIRL", "GLASS",
    "GOAL", "GREAT", "GREEN", "GROUND", "GROUP", "GROW", "GROWTH", "GUESS",
    "GUN", "GUY", "HAIR", "HALF", "HAND", "HANG", "HAPPEN", "HAPPY",
    "HARD", "HEAD", "HEALTH", "HEAR", "HEART", "HEAT", "HEAVY", "HELP",
    "HERE", "HERSELF", "HIGH", "HIMSELF", "HIS", "HISTORY", "HIT", "HOLD",
    "HOME", "HOPE", "HOSPITAL", "HOT", "HOTEL", "HOUR", "HOUSE", "HOWEVER",
    "HUGE", "HUMAN", "HUNDRED", "HUSBAND", "IDEA", "IDENTIFY", "IMAGE", "IMAGINE",
    "IMPACT", "IMPROVE", "INCLUDE", "INCREASE", "INDEED", "INDICATE", "INDUSTRY", "INSIDE",
    "INSTEAD", "INTEREST", "INVOLVE", "ISSUE", "ITEM", "ITSELF", "JOB", "JOIN",
    "KEEP", "KEY", "KID", "KILL", "KIND", "KITCHEN", "LAND", "LANGUAGE",
    "LARGE", "LAST", "LATE", "LATER", "LAUGH", "LAW", "LAWYER", "LAY",
    "LEAD", "LEADER", "LEARN", "LEAST", "LEAVE", "LEFT", "LEG", "LEGAL",
    "LESS", "LETTER", "LEVEL", "LIE", "LIFE", "LIGHT", "LIKELY", "LINE",
    "LIST", "LISTEN", "LITTLE", "LIVE", "LOCAL", "LONG", "LOSE", "LOSS",
    "LOT", "LOVE", "LOW", "MACHINE", "MAGAZINE", "MAIN", "MAINTAIN", "MAJOR",
    "MAJORITY", "MAN", "MANAGE", "MANAGER", "MANY", "MARKET", "MARRIAGE", "MATERIAL",
    "MATTER", "MAY", "MAYBE", "MEAN", "MEASURE", "MEDIA", "MEDICAL", "MEET",
    "MEETING", "MEMBER", "MEMORY", "MENTION", "MESSAGE", "METHOD", "MIDDLE", "MIGHT",
    "MILITARY", "MILLION", "MIND", "MINUTE", "MISS", "MISSION", "MODEL", "MODERN",
    "MOMENT", "MONEY", "MONTH", "MORE", "MORNING", "MOTHER", "MOUTH", "MOVE",
    "MOVEMENT", "MOVIE", "MUCH", "MUSIC", "MUST", "MYSELF", "NAME", "NATION",
    "NATIONAL", "NATURAL", "NATURE", "NEAR", "NEARLY", "NEED", "NETWORK", "NEVER",
    "NEWS", "NEXT", "NICE", "NIGHT", "NONE", "NORTH", "NOTE", "NOTHING",
    "NOTICE", "NUMBER", "OCCUR", "OFF", "OFFER", "OFFICE", "OFFICER", "OFFICIAL",
    "OFTEN", "OIL", "OLD", "ONCE", "ONTO", "OPEN", "OPTION", "ORDER",
    "OTHERS", "OUTSIDE", "OWN", "OWNER", "PAGE", "PAIN", "PAINTING", "PAPER",
    "PARENT", "PART", "PARTNER", "PARTY", "PASS", "PAST", "PATIENT", "PATTERN",
    "PAY", "PEACE", "PER", "PERFORM", "PERHAPS", "PERIOD", "PERSON", "PERSONAL",
    "PHONE", "PHYSICAL", "PICK", "PICTURE", "PIECE", "PLACE", "PLAN", "PLANT",
    "PLAY", "PLAYER", "POINT", "POLICE", "POLICY", "POLITICS", "POOR", "POPULAR",
    "POSITION", "POSITIVE", "POSSIBLE", "POWER", "PRACTICE", "PREPARE", "PRESENT", "PRESSURE",
    "PRETTY", "PREVENT", "PRICE", "PRIVATE", "PROBABLY", "PROBLEM", "PROCESS", "PRODUCE",
    "PRODUCT", "PROGRAM", "PROJECT", "PROPERTY", "PROTECT", "PROVE", "PROVIDE", "PUBLIC",
    "PULL", "PURPOSE", "PUSH", "PUT", "QUALITY", "QUESTION", "QUICKLY", "QUITE",
    "RACE", "RADIO", "RAISE", "RANGE", "RATE", "RATHER", "REACH", "READ",
    "READY", "REAL", "REALITY", "REALIZE", "REALLY", "REASON", "RECEIVE", "RECENT",
    "RECENTLY", "RECORD", "RED", "REDUCE", "REFLECT", "REGION", "RELATE", "REMAIN",
    "REMEMBER", "REMOVE", "REPORT", "REQUIRE", "RESEARCH", "RESOURCE", "RESPOND", "RESPONSE",
    "REST", "RESULT", "RETURN", "REVEAL", "RICH", "RIGHT", "RISE", "RISK",
    "ROAD", "ROCK", "ROLE", "ROOM", "RULE", "RUN", "SAFE", "SAME",
    "SAVE", "SCENE", "SCHOOL", "SCIENCE", "SCORE", "SEA", "SEASON", "SEAT",
    "SECOND", "SECTION", "SECURITY", "SEEK", "SEEM", "SELL", "SEND", "SENIOR",
    "SENSE", "SERIES", "SERIOUS", "SERVE", "SERVICE", "SEVEN", "SEVERAL", "SHAKE",
    "SHARE", "SHOOT", "SHORT", "SHOT", "SHOULD", "SHOULDER", "SHOW", "SIDE",
    "SIGN", "SIMILAR", "SIMPLE", "SIMPLY", "SINCE", "SING", "SINGLE", "SISTER",
    "SIT", "SITE", "SIX", "SIZE", "SKILL", "SKIN", "SMALL", "SMILE",
    "SOCIAL", "SOCIETY", "SOLDIER", "SOMEBODY", "SOMEONE", "SON", "SONG", "SOON",
    "SORT", "SOUND", "SOURCE", "SOUTH", "SOUTHERN", "SPACE", "SPEAK", "SPECIAL",
    "SPECIFIC", "SPEECH", "SPEND", "SPORT", "SPRING", "STAFF", "STAGE", "STAND",
    "STANDARD", "STAR", "START", "STATE", "STATION", "STAY", "STEP", "STILL",
    "STOCK", "STOP", "STORE", "STORY", "STRATEGY", "STREET", "STRONG", "STUDENT",
    "STUDY", "STUFF", "STYLE", "SUBJECT", "SUCCESS", "SUCH", "SUDDENLY", "SUFFER",
    "SUGGEST", "SUMMER", "SUPPORT", "SURE", "SURFACE", "SYSTEM", "TABLE", "TALK",
    "TASK", "TAX", "TEACH", "TEACHER", "TEAM", "TELL", "TEN", "TEND",
    "TERM", "TEST", "THANK", "THAT", "THEORY", "THING", "THIRD", "THOSE",
    "THOUGH", "THOUGHT", "THOUSAND", "THREAT", "THREE", "THROUGH", "THROW", "THUS",
    "TODAY", "TOGETHER", "TONIGHT", "TOO", "TOP", "TOTAL", "TOUGH", "TOWARD",
    "TOWN", "TRADE", "TRAINING", "TRAVEL", "TREAT", "TREE", "TRIAL", "TRIP",
    "TROUBLE", "TRUE", "TRUTH", "TRY", "TURN", "TYPE", "UNDER", "UNIT",
    "UNTIL", "UPON", "USUALLY", "VALUE", "VARIOUS", "VERY", "VICTIM", "VIEW",
    "VIOLENCE", "VISIT", "VOICE", "VOTE", "WAIT", "WALK", "WALL", "WAR",
    "WATCH", "WATER", "WEAPON", "WEAR", "WEEK", "WEIGHT", "WEST", "WESTERN",
    "WHATEVER", "WHERE", "WHETHER", "WHILE", "WHITE", "WHOLE", "WHOM", "WHOSE",
    "WHY", "WIDE", "WIFE", "WIN", "WIND", "WINDOW", "WISH", "WITHIN",
    "WITHOUT", "WOMAN", "WONDER", "WORD", "WORKER", "WORLD", "WORRY", "WRITE",
    "WRITER", "WRONG", "YARD", "YEAH", "YES", "YET", "YOUNG", "YOURSELF",
    "APPLE", "BREAD", "CLOUD", "DANCE", "EAGLE", "FENCE", "GRAPE", "IGLOO",
    "JOLLY", "KOALA", "LEMON", "MANGO", "OCEAN", "PIANO", "QUEEN", "RIVER",
    "SNAKE", "TIGER", "UNCLE", "VIVID", "WHALE", "XENON", "ZEBRA", "STORM",
    "FROST", "BLOOM", "CRANE", "DRIFT", "EMBER", "FLAME", "GLOBE", "HASTE",
    "IVORY", "JEWEL", "KNIFE", "LARCH", "MAPLE", "NOBLE", "OLIVE", "PEARL",
    "QUILT", "RIDGE", "SLATE", "TORCH", "URBAN", "VAULT", "WHEAT", "BLAZE",
    "CHORD", "CRISP", "DAISY", "ELBOW", "FLUTE", "GROVE", "HINGE", "INLET",
    "JUMBO", "KAYAK", "LEDGE", "MIRTH", "NOTCH", "ORBIT", "PLUME", "QUART",
    "REALM", "SHORE", "TULIP", "USHER", "VIGOR", "WOVEN", "AMBER", "BIRCH",
    "CEDAR", "DELTA", "ELDER", "FABLE", "GAUGE", "HERON", "IRIS", "JADE",
    "KITE", "LILY", "MOSS", "NEWT", "ONYX", "PINE", "QUAY", "ROSE",
    "SAGE", "TEAL", "VINE", "WOLF", "YARN", "ZINC", "SHOP", "CAFE",
    "MALL", "PARK", "GATE", "EXIT", "TAXI", "BUS", "FUEL", "EURO",
    "CASH", "SALE", "RENT", "LOAN", "MENU", "MEAT", "RICE", "SOUP",
    "CAKE", "MILK", "BEER", "WINE", "TEA", "SALT", "HERB", "CORN",
};

}  // namespace

const std::vector<std::string>& word_list() {
    static const std::vector<std::string> words(kWords, kWords + 1000);
    return words;
}

}  // namespace glyphlab::corpus
