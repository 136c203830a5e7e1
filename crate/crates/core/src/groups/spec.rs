// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::GroupError;

/// Compact description of a finite group.
///
/// Orders are total group orders: `Dihedral(30)` is the symmetry group of the
/// 15-gon.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Quaternion(usize),
    Quasidihedral(usize),
    Symmetric(usize),
    Product(Vec<GroupSpec>),
    Cayley(PathBuf),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Quaternion(n) => write!(f, "quaternion:{n}"),
            GroupSpec::Quasidihedral(n) => write!(f, "quasidihedral:{n}"),
            GroupSpec::Symmetric(m) => write!(f, "symmetric:{m}"),
            GroupSpec::Product(factors) => {
                f.write_str("product:(")?;
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{factor}")?;
                }
                f.write_str(")")
            }
            GroupSpec::Cayley(path) => write!(f, "cayley:{}", path.display()),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, GroupError> {
        let s = s.trim();
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| GroupError::InvalidSpec(format!("`{s}`: expected `family:argument`")))?;
        let number = || {
            arg.trim().parse::<usize>().map_err(|_| {
                GroupError::InvalidSpec(format!("`{s}`: `{arg}` is not a non-negative integer"))
            })
        };
        match kind.trim() {
            "cyclic" => Ok(GroupSpec::Cyclic(number()?)),
            "dihedral" => Ok(GroupSpec::Dihedral(number()?)),
            "quaternion" => Ok(GroupSpec::Quaternion(number()?)),
            "quasidihedral" => Ok(GroupSpec::Quasidihedral(number()?)),
            "symmetric" => Ok(GroupSpec::Symmetric(number()?)),
            "cayley" if !arg.is_empty() => Ok(GroupSpec::Cayley(PathBuf::from(arg))),
            "product" => {
                let inner = arg
                    .trim()
                    .strip_prefix('(')
                    .and_then(|rest| rest.strip_suffix(')'))
                    .ok_or_else(|| {
                        GroupError::InvalidSpec(format!("`{s}`: product needs `(a,b,...)`"))
                    })?;
                let factors = split_top_level(inner)
                    .ok_or_else(|| {
                        GroupError::InvalidSpec(format!("`{s}`: unbalanced parentheses"))
                    })?
                    .into_iter()
                    .map(str::parse)
                    .collect::<Result<Vec<GroupSpec>, _>>()?;
                if factors.is_empty() {
                    return Err(GroupError::InvalidSpec(format!("`{s}`: empty product")));
                }
                Ok(GroupSpec::Product(factors))
            }
            other => Err(GroupError::InvalidSpec(format!(
                "unknown group family `{other}`"
            ))),
        }
    }
}

/// Splits on commas that are not nested inside parentheses.
fn split_top_level(s: &str) -> Option<Vec<&str>> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    if !s.trim().is_empty() {
        parts.push(&s[start..]);
    }
    Some(parts)
}
