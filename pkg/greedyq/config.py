"""Configuration management for greedyq."""
import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


@dataclass
class GreedyConfig:
    log_level: str = os.getenv("GREEDYQ_LOG_LEVEL", "WARNING")
    search_seeds: int = int(os.getenv("GREEDYQ_SEARCH_SEEDS", "64"))
    tail_probability: float = float(os.getenv("GREEDYQ_TAIL_PROBABILITY", "1e-9"))
    tie_tolerance: float = float(os.getenv("GREEDYQ_TIE_TOLERANCE", "1e-13"))
    fixed_point_max_iter: int = int(os.getenv("GREEDYQ_FIXED_POINT_MAX_ITER", "200"))
    lloyd_max_iter: int = int(os.getenv("GREEDYQ_LLOYD_MAX_ITER", "200000"))
    quad_epsabs: float = float(os.getenv("GREEDYQ_QUAD_EPSABS", "1e-14"))
    quad_epsrel: float = float(os.getenv("GREEDYQ_QUAD_EPSREL", "1e-11"))
    mc_samples: int = int(os.getenv("GREEDYQ_MC_SAMPLES", "1000000"))
    mc_batch: int = int(os.getenv("GREEDYQ_MC_BATCH", "100000"))
    seed: int = int(os.getenv("GREEDYQ_SEED", "0"))


# Singleton instance
greedy_config = GreedyConfig()
