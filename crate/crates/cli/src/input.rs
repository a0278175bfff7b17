//! Reading generators and option values from the command line.

use std::path::Path;

use planevec_core::parse::{parse_derivation, parse_scalar};
use planevec_core::{Derivation, Error, Scalar};
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("in `{src}`: {err}")]
    Parse { src: String, err: Error },
    #[error("{0}")]
    Core(#[from] Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Error text with a caret under the failing column for syntax errors.
    pub fn render(&self) -> String {
        match self {
            CliError::Parse { src, err: Error::Syntax { pos, msg } } => {
                format!("syntax error at column {}: {msg}\n  {src}\n  {}^", pos + 1, " ".repeat(*pos))
            }
            other => other.to_string(),
        }
    }
}

/// Splits on commas that are not nested inside brackets or parentheses.
pub fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

pub fn parse_field(src: &str) -> Result<Derivation, CliError> {
    parse_derivation(src).map_err(|err| CliError::Parse { src: src.to_string(), err })
}

/// Generators from a file (one per line, `#` comments) or an inline list.
pub fn load_generators(arg: &str) -> Result<Vec<(String, Derivation)>, CliError> {
    let path = Path::new(arg);
    let sources: Vec<String> = if path.is_file() {
        std::fs::read_to_string(path)?
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
            .filter(|l| !l.is_empty())
            .collect()
    } else {
        split_top_level(arg)
    };
    if sources.is_empty() {
        return Err(CliError::Input("no generators given".into()));
    }
    sources
        .into_iter()
        .map(|s| {
            let d = parse_field(&s)?;
            Ok((s, d))
        })
        .collect()
}

pub fn parse_delta(arg: &str) -> Result<(Scalar, Scalar), CliError> {
    let parts = split_top_level(arg);
    if parts.len() != 2 {
        return Err(CliError::Input(format!("--delta expects two scalars `a,b`, got `{arg}`")));
    }
    let sc = |s: &str| parse_scalar(s).map_err(|err| CliError::Parse { src: s.to_string(), err });
    Ok((sc(&parts[0])?, sc(&parts[1])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_commas_are_kept() {
        assert_eq!(split_top_level("D[-1,2], D[1,-1]"), vec!["D[-1,2]", "D[1,-1]"]);
        assert_eq!(split_top_level("delta[1,sqrt2] , (x+y)*dx,"), vec!["delta[1,sqrt2]", "(x+y)*dx"]);
        assert!(split_top_level(" , ").is_empty());
    }

    #[test]
    fn caret_points_at_error() {
        let err = parse_field("x*dx + * y").unwrap_err();
        let text = err.render();
        assert!(text.starts_with("syntax error at column 8"), "{text}");
        assert!(text.ends_with("\n         ^"), "{text:?}");
    }

    #[test]
    fn file_generators_skip_comments() {
        let dir = std::env::temp_dir().join(format!("planevec-input-{}", std::process::id()));
        std::fs::write(&dir, "# sl2\ny*dx\n\nx*dy  # lower\n").unwrap();
        let gens = load_generators(dir.to_str().unwrap()).unwrap();
        std::fs::remove_file(&dir).ok();
        assert_eq!(gens.iter().map(|g| g.0.as_str()).collect::<Vec<_>>(), vec!["y*dx", "x*dy"]);
    }
}
