//! Line-oriented fan file parsing.
//!
//! One directive per line; `#` starts a comment; blank lines are skipped:
//!
//! ```text
//! dim <n>
//! ray <name> <n integers>
//! cone <name> <ray names...>
//! ```
//!
//! The `dim` line comes first. Cone lines list maximal cones only; faces are
//! derived. All names share one namespace and must be unique.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigInt;
use thiserror::Error;

use crate::fan::{fan_from_description, Fan, FanError, FanWarning};
use crate::lattice;
use crate::matrix::Vector;

#[derive(Debug, Error)]
pub enum FanFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("fan file declares no cones")]
    NoCones,
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn syntax<T>(line: usize, msg: impl Into<String>) -> Result<T, FanFileError> {
    Err(FanFileError::Syntax {
        line,
        msg: msg.into(),
    })
}

/// A parsed fan file: named rays and named maximal cones. Syntax and name
/// resolution only; geometric validation happens in [`FanFile::build`].
#[derive(Clone, Debug)]
pub struct FanFile {
    pub n: usize,
    pub ray_names: Vec<String>,
    pub ray_coords: Vec<Vector>,
    pub cone_names: Vec<String>,
    /// Per cone, indices into `ray_names` in the listed order.
    pub cone_rays: Vec<Vec<usize>>,
}

pub fn parse_fan_text(text: &str) -> Result<FanFile, FanFileError> {
    let mut n: Option<usize> = None;
    let mut ray_names: Vec<String> = Vec::new();
    let mut ray_coords: Vec<Vector> = Vec::new();
    let mut cone_names: Vec<String> = Vec::new();
    let mut pending: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut names: BTreeSet<String> = BTreeSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let stripped = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let mut words = stripped.split_whitespace();
        let Some(head) = words.next() else { continue };
        match head {
            "dim" => {
                if n.is_some() {
                    return syntax(line, "repeated `dim` directive");
                }
                let Some(w) = words.next() else {
                    return syntax(line, "`dim` needs a positive integer");
                };
                let Ok(d) = w.parse::<usize>() else {
                    return syntax(line, format!("invalid dimension `{w}`"));
                };
                if d == 0 {
                    return syntax(line, "dimension must be at least 1");
                }
                if words.next().is_some() {
                    return syntax(line, "trailing tokens after `dim <n>`");
                }
                n = Some(d);
            }
            "ray" => {
                let Some(d) = n else {
                    return syntax(line, "`ray` before `dim`");
                };
                let Some(name) = words.next() else {
                    return syntax(line, "`ray` needs a name");
                };
                if !names.insert(name.to_string()) {
                    return syntax(line, format!("name `{name}` already used"));
                }
                let mut v: Vector = Vec::new();
                for w in words {
                    let Ok(c) = w.parse::<BigInt>() else {
                        return syntax(line, format!("invalid coordinate `{w}`"));
                    };
                    v.push(c);
                }
                if v.len() != d {
                    return syntax(
                        line,
                        format!("ray `{name}` has {} coordinates, expected {d}", v.len()),
                    );
                }
                ray_names.push(name.to_string());
                ray_coords.push(v);
            }
            "cone" => {
                if n.is_none() {
                    return syntax(line, "`cone` before `dim`");
                }
                let Some(name) = words.next() else {
                    return syntax(line, "`cone` needs a name");
                };
                if !names.insert(name.to_string()) {
                    return syntax(line, format!("name `{name}` already used"));
                }
                let listed: Vec<String> = words.map(|w| w.to_string()).collect();
                if listed.is_empty() {
                    return syntax(line, format!("cone `{name}` lists no rays"));
                }
                pending.push((line, name.to_string(), listed));
            }
            other => {
                return syntax(line, format!("unknown directive `{other}`"));
            }
        }
    }

    let Some(n) = n else {
        return syntax(1, "missing `dim <n>` line");
    };
    if pending.is_empty() {
        return Err(FanFileError::NoCones);
    }

    let ray_index: BTreeMap<&str, usize> = ray_names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut cone_rays: Vec<Vec<usize>> = Vec::new();
    for (line, name, listed) in pending {
        let mut seen = BTreeSet::new();
        let mut idxs = Vec::new();
        for w in &listed {
            let Some(&k) = ray_index.get(w.as_str()) else {
                return syntax(line, format!("cone `{name}` references unknown ray `{w}`"));
            };
            if !seen.insert(k) {
                return syntax(line, format!("duplicate ray `{w}` in cone `{name}`"));
            }
            idxs.push(k);
        }
        cone_names.push(name);
        cone_rays.push(idxs);
    }

    Ok(FanFile {
        n,
        ray_names,
        ray_coords,
        cone_names,
        cone_rays,
    })
}

impl FanFile {
    pub fn build(&self) -> Result<(Fan, Vec<FanWarning>), FanError> {
        fan_from_description(self.n, &self.ray_coords, &self.cone_rays)
    }

    /// Index of the named file cone among the built fan's maximal cones.
    /// None if the name is unknown or the cone was dropped as non-maximal.
    pub fn max_cone_index(&self, fan: &Fan, name: &str) -> Option<usize> {
        let ci = self.cone_names.iter().position(|s| s == name)?;
        let mut key = BTreeSet::new();
        for &ri in &self.cone_rays[ci] {
            let p = lattice::primitive(&self.ray_coords[ri]).ok()?;
            key.insert(fan.ray_index(&p)?);
        }
        fan.max_cone_ray_sets.iter().position(|s| *s == key)
    }

    /// File names of the built fan's maximal cones, in fan order. Every
    /// maximal cone of a built fan comes from some listed cone; when two
    /// listed cones coincide, the first name wins.
    pub fn max_cone_names(&self, fan: &Fan) -> Vec<String> {
        let mut names = vec![String::new(); fan.max_cones.len()];
        for name in &self.cone_names {
            if let Some(i) = self.max_cone_index(fan, name) {
                if names[i].is_empty() {
                    names[i] = name.clone();
                }
            }
        }
        assert!(names.iter().all(|s| !s.is_empty()));
        names
    }

    /// File names of the built fan's rays, in fan order; when several file
    /// rays normalize to the same primitive vector the first name wins.
    pub fn fan_ray_names(&self, fan: &Fan) -> Vec<String> {
        let mut names = vec![String::new(); fan.rays.len()];
        for (name, coord) in self.ray_names.iter().zip(&self.ray_coords) {
            if let Ok(p) = lattice::primitive(coord) {
                if let Some(k) = fan.ray_index(&p) {
                    if names[k].is_empty() {
                        names[k] = name.clone();
                    }
                }
            }
        }
        assert!(names.iter().all(|s| !s.is_empty()));
        names
    }
}

pub fn load_fan_file(path: &Path) -> Result<(FanFile, Fan, Vec<FanWarning>), FanFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| FanFileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let ff = parse_fan_text(&text)?;
    let (fan, warnings) = ff.build()?;
    Ok((ff, fan, warnings))
}
