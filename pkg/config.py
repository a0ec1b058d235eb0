import os
from dotenv import load_dotenv

# Load .env from the project root unless PCANON_CONFIG points elsewhere
load_dotenv(dotenv_path=os.getenv("PCANON_CONFIG", os.path.join(os.path.dirname(__file__), '.env')))

CACHE_DIR = os.getenv("CACHE_DIR", os.path.join(os.path.dirname(__file__), ".pcanon_cache"))
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
MAX_WORKERS = int(os.environ.get("MAX_WORKERS", 4))
DEFAULT_FORMAT = os.getenv("DEFAULT_FORMAT", "json")
