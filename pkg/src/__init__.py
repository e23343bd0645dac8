"""Kontsevich star product and Kashiwara-Vergne workbench."""
from dotenv import load_dotenv

# Load KVBENCH_* settings from a .env file
load_dotenv()
