//! IO companion to `antipode-core`: JSON wire formats for cover specs and
//! reports, seeded spec generation, SVG rendering of the unfolded
//! octahedral sphere, and the `antipode-bridge` command line.
//!
//! The core crate stays `no_std` and side-effect free; everything that
//! touches files, clocks, randomness, or threads lives here.

pub mod cli;
pub mod dto;
pub mod exec;
pub mod gen;
pub mod render;

use std::io;
use std::path::Path;

/// Writes `contents` atomically: to a sibling temp file first, then a
/// rename over the target.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}
