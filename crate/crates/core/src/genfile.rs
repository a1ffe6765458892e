//! The generator file format: first line `degree n`, then one generator per
//! line in 1-based disjoint-cycle notation, identity written `()`. Blank
//! lines and `#` comments are skipped.

use crate::error::{Error, Result};
use crate::group::{PermGroup, MAX_DEGREE};
use crate::perm::{parse_cycles, Permutation};

pub fn parse_generator_file(text: &str) -> Result<PermGroup> {
    let mut degree: Option<usize> = None;
    let mut gens: Vec<Permutation> = Vec::new();
    let mut offset = 0usize;
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let stripped = line.trim_end_matches(['\n', '\r']);
        let content = match stripped.find('#') {
            Some(pos) => &stripped[..pos],
            None => stripped,
        };
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        match degree {
            None => {
                let rest = trimmed.strip_prefix("degree").ok_or(Error::Parse {
                    offset: line_start,
                    message: "expected `degree n` on the first line".into(),
                })?;
                let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                    offset: line_start,
                    message: "bad degree".into(),
                })?;
                if n == 0 {
                    return Err(Error::Parse {
                        offset: line_start,
                        message: "degree must be positive".into(),
                    });
                }
                if n > MAX_DEGREE {
                    return Err(Error::DegreeTooLarge(n));
                }
                degree = Some(n);
            }
            Some(n) => {
                let leading = content.len() - content.trim_start().len();
                gens.push(parse_cycles(trimmed, n, line_start + leading)?);
            }
        }
    }
    let degree = degree.ok_or(Error::Parse {
        offset: 0,
        message: "empty generator file".into(),
    })?;
    PermGroup::new(degree, gens)
}

pub fn format_generator_file(group: &PermGroup) -> String {
    let mut out = format!("degree {}\n", group.degree());
    for g in group.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}
