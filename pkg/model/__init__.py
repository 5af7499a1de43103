from .words import Word, Pair, parse_word, parse_pair, ak_pair, CANONICAL
from .conjugacy import acm_conjugates, build_pcg, harvest, finite_quotient_oracle, Verdict
from .normal_forms import cyclic_nf, full_nf, normal_form, whitehead_table
from .moves import Move, MoveKind, apply_acm, replay, replay_script, load_script
from .search import SearchConfig, SearchReport, run
from .classify import RelatorTag, classify_relator, detect_bs_type
