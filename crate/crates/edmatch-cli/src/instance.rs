//! Instance file ingestion.
//!
//! An instance file holds the pattern text on line 1, the word on line 2 and
//! an optional distance budget on line 3. Lines are trimmed of their trailing
//! newline only. `-` reads from standard input. In binary mode the word line
//! is taken as raw bytes, one symbol per byte.

use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use edmatch::{Pattern, Word};

pub struct Instance {
    pub pattern: Pattern,
    pub word: Word,
    pub delta: Option<usize>,
}

pub fn read_instance(path: &Path, binary: bool) -> Result<Instance> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .context("reading standard input")?;
        buf
    } else {
        std::fs::read(path).with_context(|| format!("reading {}", path.display()))?
    };
    parse_instance(&bytes, binary)
}

pub fn parse_instance(bytes: &[u8], binary: bool) -> Result<Instance> {
    let mut lines = bytes.split(|&b| b == b'\n');
    let pattern_line = lines.next().context("instance file is empty")?;
    let word_line = lines
        .next()
        .context("instance file is missing the word line")?;
    let delta_line = lines.next();

    let pattern_text =
        std::str::from_utf8(strip_cr(pattern_line)).context("pattern line is not UTF-8")?;
    let pattern = Pattern::parse(pattern_text).context("parsing pattern")?;

    let word = if binary {
        Word::from_bytes(strip_cr(word_line))
    } else {
        let text = std::str::from_utf8(strip_cr(word_line)).context("word line is not UTF-8")?;
        Word::from_text(text)
    };

    let delta = match delta_line {
        None => None,
        Some(line) => {
            let text = std::str::from_utf8(strip_cr(line)).context("delta line is not UTF-8")?;
            if text.is_empty() {
                None
            } else {
                Some(text.parse::<usize>().context("parsing delta line")?)
            }
        }
    };
    if let Some(extra) = lines.next() {
        if !extra.is_empty() {
            bail!("instance file has unexpected content after line 3");
        }
    }
    Ok(Instance {
        pattern,
        word,
        delta,
    })
}

fn strip_cr(line: &[u8]) -> &[u8] {
    line.strip_suffix(b"\r").unwrap_or(line)
}
