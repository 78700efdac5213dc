import os
from dotenv import load_dotenv

load_dotenv()

class Settings:
    # Ограничение числа потоков для sweep
    THREADS: int = max(1, int(os.getenv("BELLSIM_THREADS", os.cpu_count() or 1)))

    # Порядок разложения по (δη, ν) в формате "A,B"
    DEFAULT_ORDER: str = os.getenv("BELLSIM_ORDER", "4,1")

    LOG_LEVEL: str = os.getenv("BELLSIM_LOG_LEVEL", "WARNING").upper()

    # Допуск сравнения с табличными коэффициентами
    TOLERANCE: float = float(os.getenv("BELLSIM_TOLERANCE", "1e-9"))

    # Запас уровней Фока сверх границы разложения
    GUARD_LEVELS: int = int(os.getenv("BELLSIM_GUARD_LEVELS", 2))

settings = Settings()
