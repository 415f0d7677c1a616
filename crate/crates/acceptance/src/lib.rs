//! Acceptance suite for `timerev`; see `tests/acceptance.rs`.
