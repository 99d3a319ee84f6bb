//! Measurement protocols. (being built)
