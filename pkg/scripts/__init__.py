from .collect_relators import RelatorCollector
