//! Control-error injection. (being built)
