//! Piecewise Laurent polynomial file parsing and formatting.
//!
//! Line 1 names the fan file; each further line assigns one maximal cone its
//! Laurent polynomial value:
//!
//! ```text
//! fan <path-to-fan-file>
//! on <cone-name>: <laurent-expr>
//! ```
//!
//! `#` starts a comment; blank lines are skipped. Every maximal cone of the
//! fan must receive exactly one value. A relative fan path resolves against
//! the PLP file's directory.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;

use crate::fan::{Fan, FanWarning};
use crate::fanfile::{load_fan_file, FanFile, FanFileError};
use crate::laurent::{format_laurent, parse_laurent, LaurentPoly};

#[derive(Debug, Error)]
pub enum PlpFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("first directive must be `fan <path>`")]
    MissingFanLine,
    #[error("cone `{name}` (line {line}) is not a maximal cone of the fan")]
    UnknownCone { line: usize, name: String },
    #[error("cone `{name}` (line {line}) already has a value")]
    DuplicateCone { line: usize, name: String },
    #[error("no value for maximal cone(s): {}", names.join(", "))]
    MissingCones { names: Vec<String> },
    #[error(transparent)]
    FanFile(#[from] FanFileError),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn syntax<T>(line: usize, msg: impl Into<String>) -> Result<T, PlpFileError> {
    Err(PlpFileError::Syntax {
        line,
        msg: msg.into(),
    })
}

/// A loaded PLP file with its fan. `values` and `cone_names` align with
/// `fan.max_cones`. Values are raw, not yet compatibility-checked; run
/// [`crate::piecewise::plp_validate`] to obtain a verified piecewise poly.
#[derive(Debug)]
pub struct PlpDocument {
    pub fan_path: PathBuf,
    pub fan_file: FanFile,
    pub fan: Arc<Fan>,
    pub fan_warnings: Vec<FanWarning>,
    pub cone_names: Vec<String>,
    pub values: Vec<LaurentPoly>,
}

pub fn parse_plp_text(text: &str, base_dir: &Path) -> Result<PlpDocument, PlpFileError> {
    let mut fan_path: Option<String> = None;
    let mut assignments: Vec<(usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stripped = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("fan ") {
            if fan_path.is_some() {
                return syntax(line, "repeated `fan` directive");
            }
            if !assignments.is_empty() {
                return syntax(line, "`fan` must come before `on` lines");
            }
            fan_path = Some(rest.trim().to_string());
        } else if let Some(rest) = trimmed.strip_prefix("on ") {
            let Some((name_part, expr)) = rest.split_once(':') else {
                return syntax(line, "expected `on <cone-name>: <laurent-expr>`");
            };
            let name = name_part.trim();
            if name.is_empty() || name.split_whitespace().count() != 1 {
                return syntax(line, "cone name must be a single word");
            }
            if expr.trim().is_empty() {
                return syntax(line, format!("cone `{name}` has an empty expression"));
            }
            assignments.push((line, name.to_string(), expr.to_string()));
        } else {
            return syntax(line, "expected `fan <path>` or `on <cone-name>: <expr>`");
        }
    }

    let Some(fan_path) = fan_path else {
        return Err(PlpFileError::MissingFanLine);
    };
    let resolved = base_dir.join(&fan_path);
    let (fan_file, fan, fan_warnings) = load_fan_file(&resolved)?;
    let fan = Arc::new(fan);

    let mut values: Vec<Option<LaurentPoly>> = vec![None; fan.max_cones.len()];
    for (line, name, expr) in assignments {
        let Some(idx) = fan_file.max_cone_index(&fan, &name) else {
            return Err(PlpFileError::UnknownCone { line, name });
        };
        if values[idx].is_some() {
            return Err(PlpFileError::DuplicateCone { line, name });
        }
        let f = parse_laurent(&expr, fan.n)
            .map_err(|e| PlpFileError::Syntax {
                line,
                msg: format!("in value for `{name}`: {e}"),
            })?;
        values[idx] = Some(f);
    }

    let cone_names = fan_file.max_cone_names(&fan);
    let missing: Vec<String> = values
        .iter()
        .zip(&cone_names)
        .filter(|(v, _)| v.is_none())
        .map(|(_, name)| name.clone())
        .collect();
    if !missing.is_empty() {
        return Err(PlpFileError::MissingCones { names: missing });
    }

    Ok(PlpDocument {
        fan_path: resolved,
        fan_file,
        fan,
        fan_warnings,
        cone_names,
        values: values.into_iter().map(Option::unwrap).collect(),
    })
}

pub fn load_plp_file(path: &Path) -> Result<PlpDocument, PlpFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| PlpFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_plp_text(&text, base)
}

/// Renders a PLP file. `fan_path` is written verbatim; names and values
/// align with the fan's maximal cones.
pub fn format_plp_file(fan_path: &str, cone_names: &[String], values: &[LaurentPoly]) -> String {
    assert_eq!(cone_names.len(), values.len());
    let mut out = format!("fan {fan_path}\n");
    for (name, value) in cone_names.iter().zip(values) {
        out.push_str(&format!("on {name}: {}\n", format_laurent(value)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::plp_validate;
    use std::fs;

    fn write_hirzebruch_pair(dir: &Path, plp_body: &str) -> PathBuf {
        let fan_text = crate::registry::example_fan_text("hirzebruch-r", Some(1)).unwrap();
        fs::write(dir.join("h1.fan"), fan_text).unwrap();
        let plp_path = dir.join("f.plp");
        fs::write(&plp_path, plp_body).unwrap();
        plp_path
    }

    fn tmpdir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("plpfile-{tag}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn round_trip_through_text() {
        let dir = tmpdir("roundtrip");
        let plp_path = write_hirzebruch_pair(
            &dir,
            "# a global Laurent polynomial\n\
             fan h1.fan\n\
             on sigma1: 1 - 2*a1*a2^-1\n\
             on sigma2: 1 - 2*a1*a2^-1\n\
             on sigma3: 1 - 2*a1*a2^-1\n\
             on sigma4: 1 - 2*a1*a2^-1\n",
        );
        let doc = load_plp_file(&plp_path).unwrap();
        assert_eq!(doc.cone_names, vec!["sigma1", "sigma2", "sigma3", "sigma4"]);
        assert!(doc.fan_warnings.is_empty());
        let plp = plp_validate(doc.fan.clone(), doc.values.clone()).unwrap();
        let rendered = format_plp_file("h1.fan", &doc.cone_names, &plp.values);
        let reparsed = parse_plp_text(&rendered, &dir).unwrap();
        assert_eq!(reparsed.values, doc.values);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn assignment_order_is_free_and_names_map_to_cones() {
        let dir = tmpdir("order");
        let plp_path = write_hirzebruch_pair(
            &dir,
            "fan h1.fan\n\
             on sigma3: a2\n\
             on sigma1: a1\n\
             on sigma4: 3\n\
             on sigma2: a1 + a2\n",
        );
        let doc = load_plp_file(&plp_path).unwrap();
        assert_eq!(doc.values[0], parse_laurent("a1", 2).unwrap());
        assert_eq!(doc.values[2], parse_laurent("a2", 2).unwrap());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn coverage_errors() {
        let dir = tmpdir("coverage");
        let plp_path = write_hirzebruch_pair(
            &dir,
            "fan h1.fan\non sigma1: 1\non sigma2: 1\non sigma3: 1\n",
        );
        match load_plp_file(&plp_path).unwrap_err() {
            PlpFileError::MissingCones { names } => assert_eq!(names, vec!["sigma4"]),
            other => panic!("expected MissingCones, got {other:?}"),
        }
        fs::write(
            dir.join("f.plp"),
            "fan h1.fan\non sigma1: 1\non sigma1: 2\n",
        )
        .unwrap();
        assert!(matches!(
            load_plp_file(&plp_path).unwrap_err(),
            PlpFileError::DuplicateCone { line: 3, .. }
        ));
        fs::write(dir.join("f.plp"), "fan h1.fan\non tau: 1\n").unwrap();
        assert!(matches!(
            load_plp_file(&plp_path).unwrap_err(),
            PlpFileError::UnknownCone { line: 2, .. }
        ));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let base = Path::new(".");
        // `on` lines without any `fan` line: reported once at the end
        assert!(matches!(
            parse_plp_text("on c: 1\n", base).unwrap_err(),
            PlpFileError::MissingFanLine
        ));
        assert!(matches!(
            parse_plp_text("", base).unwrap_err(),
            PlpFileError::MissingFanLine
        ));
        // a late `fan` line is flagged where it appears
        assert!(matches!(
            parse_plp_text("on c: 1\nfan x\n", base).unwrap_err(),
            PlpFileError::Syntax { line: 2, .. }
        ));
        let e = parse_plp_text("fan x\nfan y\n", base).unwrap_err();
        assert!(matches!(e, PlpFileError::Syntax { line: 2, .. }));
        let e = parse_plp_text("fan x\non c 1\n", base).unwrap_err();
        assert!(matches!(e, PlpFileError::Syntax { line: 2, .. }));
        let e = parse_plp_text("fan x\non c:\n", base).unwrap_err();
        assert!(matches!(e, PlpFileError::Syntax { line: 2, .. }));
    }

    #[test]
    fn laurent_errors_name_the_cone_and_line() {
        let dir = tmpdir("laurent");
        let plp_path = write_hirzebruch_pair(
            &dir,
            "fan h1.fan\non sigma1: a1 +\non sigma2: 1\non sigma3: 1\non sigma4: 1\n",
        );
        match load_plp_file(&plp_path).unwrap_err() {
            PlpFileError::Syntax { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("sigma1"));
            }
            other => panic!("expected Syntax, got {other:?}"),
        }
        // a variable out of range for the fan's dimension
        fs::write(
            dir.join("f.plp"),
            "fan h1.fan\non sigma1: a3\non sigma2: 1\non sigma3: 1\non sigma4: 1\n",
        )
        .unwrap();
        assert!(matches!(
            load_plp_file(&plp_path).unwrap_err(),
            PlpFileError::Syntax { line: 2, .. }
        ));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn missing_fan_file_is_an_io_error() {
        let e = parse_plp_text("fan nowhere.fan\non c: 1\n", Path::new("/nonexistent-base"))
            .unwrap_err();
        assert!(matches!(
            e,
            PlpFileError::FanFile(FanFileError::Io { .. })
        ));
    }
}
