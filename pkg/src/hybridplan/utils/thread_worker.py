"""
Modul pro paralelní běh nezávislých úloh (simulačních scénářů).

Výsledky se vracejí v pořadí přidání úloh, takže výstup nezávisí na tom,
které vlákno doběhne dřív.
"""

import logging
import time
import traceback
from concurrent.futures import Future, ThreadPoolExecutor
from typing import Any, Callable, List, Optional, Tuple

logger = logging.getLogger("hybridplan.workers")


class ThreadPool:
    """
    Třída pro správu více vláken.

    Příklad použití:
    ```python
    pool = ThreadPool(max_threads=2)
    pool.add_task(run_hybrid, plan, case1, name="case1")
    pool.add_task(run_hybrid, plan, case2, name="case2")
    results = pool.wait_for_all()
    ```
    """

    def __init__(self, max_threads: int = 4):
        """
        Inicializace thread poolu.

        Args:
            max_threads: Maximální počet současně běžících vláken
        """
        self.max_threads = max(1, int(max_threads))
        self.tasks: List[Tuple[str, Callable, tuple, dict]] = []

    def add_task(self, fn: Callable, *args, name: Optional[str] = None, **kwargs) -> int:
        """
        Přidá úkol do fronty.

        Args:
            fn: Funkce, která bude spuštěna v samostatném vlákně
            *args: Argumenty pro funkci
            name: Název úlohy pro logy
            **kwargs: Klíčové argumenty pro funkci

        Returns:
            Pořadí úlohy ve výsledcích
        """
        self.tasks.append((name or getattr(fn, "__name__", "task"), fn, args, kwargs))
        return len(self.tasks) - 1

    def wait_for_all(self) -> List[Any]:
        """
        Spustí všechny úlohy a počká na jejich dokončení.

        Returns:
            Výsledky v pořadí přidání úloh

        Raises:
            Exception: první výjimka z úloh (v pořadí přidání)
        """
        tasks, self.tasks = self.tasks, []
        if not tasks:
            return []
        start_time = time.time()
        if self.max_threads == 1 or len(tasks) == 1:
            results = [fn(*args, **kwargs) for _, fn, args, kwargs in tasks]
        else:
            with ThreadPoolExecutor(max_workers=min(self.max_threads, len(tasks))) as executor:
                futures: List[Future] = [executor.submit(fn, *args, **kwargs)
                                         for _, fn, args, kwargs in tasks]
                results = []
                for (name, _, _, _), future in zip(tasks, futures):
                    error = future.exception()
                    if error is not None:
                        logger.debug(f"Úloha {name} selhala: {error}\n"
                                     f"{''.join(traceback.format_exception(error))}")
                        raise error
                    results.append(future.result())
        logger.debug(f"Dokončeno {len(tasks)} úloh za {time.time() - start_time:.2f} s")
        return results
