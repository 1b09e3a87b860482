from . import (
    reports,
    run_config
)
