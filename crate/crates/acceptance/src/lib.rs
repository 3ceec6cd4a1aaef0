//! Host package for the `acceptance` test target. Run it with
//! `cargo test -p switchstab-verify --test acceptance`.
