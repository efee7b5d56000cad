//! Holds the `acceptance` test target; run it with
//! `cargo test -p itm-acceptance --test acceptance`.
