import logging
import logging.handlers
import os
import json
from datetime import datetime, timezone


class JSONFormatter(logging.Formatter):
    """
    Formatador JSON para logs estruturados
    """
    EXTRA_KEYS = (
        'action', 'params', 'level_index', 'probe', 'method',
        'execution_time', 'points', 'seed', 'draws', 'steps',
    )

    def format(self, record):
        log_entry = {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
        }

        # Adicionar informações extras se disponíveis
        for key in self.EXTRA_KEYS:
            if hasattr(record, key):
                log_entry[key] = getattr(record, key)

        # Adicionar stack trace para erros
        if record.exc_info:
            log_entry['exception'] = self.formatException(record.exc_info)

        return json.dumps(log_entry, ensure_ascii=False, default=str)


class PerformanceLogger:
    """
    Logger para métricas de performance das rotinas numéricas
    """
    def __init__(self):
        self.logger = logging.getLogger('performance')

    def log_sweep_time(self, sweep_param, points, execution_time, preset=None):
        """Log tempo de execução de uma varredura"""
        self.logger.info(
            f"Sweep over {sweep_param} ({points} points) finished",
            extra={
                'action': 'sweep',
                'points': points,
                'execution_time': execution_time,
                'params': {'sweep_param': sweep_param, 'preset': preset},
            }
        )

    def log_verify_time(self, seed, draws, execution_time):
        """Log tempo de execução da bateria de propriedades"""
        self.logger.info(
            f"Verification battery (seed={seed}, draws={draws}) finished",
            extra={
                'action': 'verify',
                'seed': seed,
                'draws': draws,
                'execution_time': execution_time,
            }
        )

    def log_evolve_time(self, steps, execution_time, level_index=None):
        """Log tempo de execução de uma integração RK4"""
        self.logger.info(
            f"Trajectory with {steps} RK4 steps finished",
            extra={
                'action': 'evolve',
                'steps': steps,
                'level_index': level_index,
                'execution_time': execution_time,
            }
        )


def _console_only(level):
    return {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'json': {'()': JSONFormatter},
            'console': {'format': '%(asctime)s - %(name)s - %(levelname)s - %(message)s'}
        },
        'handlers': {
            'console': {
                'class': 'logging.StreamHandler',
                'formatter': 'console',
                'level': level,
                # stdout fica reservado para CSV/JSON dos comandos
                'stream': 'ext://sys.stderr',
            }
        },
        'loggers': {
            'django': {'handlers': ['console'], 'level': 'WARNING', 'propagate': False},
            'core': {'handlers': ['console'], 'level': level, 'propagate': False},
            'performance': {'handlers': ['console'], 'level': 'WARNING', 'propagate': False},
        },
        'root': {'level': 'WARNING', 'handlers': ['console']}
    }


def setup_logging(base_dir=None, log_dir=None, level='INFO'):
    """
    Configurar sistema de logging

    Sem ``log_dir`` tudo vai para o console (stderr). Com ``log_dir`` os
    registros de ``core`` e ``performance`` também vão para arquivos JSON
    rotativos; se o diretório não puder ser criado, rebaixa para console-only.
    """
    if not log_dir:
        return _console_only(level)

    if base_dir is not None and not os.path.isabs(log_dir):
        log_dir = os.path.join(base_dir, log_dir)
    try:
        os.makedirs(log_dir, exist_ok=True)
    except Exception:
        return _console_only(level)

    config = _console_only(level)
    config['handlers'].update({
        'file_json': {
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': os.path.join(log_dir, 'adiabatic_qfi.json'),
            'maxBytes': 10 * 1024 * 1024,  # 10MB
            'backupCount': 5,
            'formatter': 'json',
            'level': level
        },
        'performance_file': {
            'class': 'logging.handlers.RotatingFileHandler',
            'filename': os.path.join(log_dir, 'performance.json'),
            'maxBytes': 15 * 1024 * 1024,  # 15MB
            'backupCount': 7,
            'formatter': 'json',
            'level': 'INFO'
        },
    })
    config['loggers']['core']['handlers'] = ['console', 'file_json']
    config['loggers']['performance'] = {
        'handlers': ['performance_file'],
        'level': 'INFO',
        'propagate': False
    }
    return config


# Instância global do logger de performance
performance_logger = PerformanceLogger()
