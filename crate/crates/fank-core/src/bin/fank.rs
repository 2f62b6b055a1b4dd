//! Command-line frontend: fan property checks, isomorphism verdicts, cone
//! ideals, piecewise Laurent polynomial verification and construction, and
//! the bundled example registry.
//!
//! Exit codes: 0 success; 1 verdict "not-isomorphic" (still a successful
//! computation); 2 input error, including PLP files that fail compatibility;
//! 3 internal invariant violation.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use fank_core::classify::{classify, Outcome};
use fank_core::cone::{cone_from_rays, intersect, Cone, ConeError};
use fank_core::fan::{clump_structure, Fan, FanError};
use fank_core::fanfile::{load_fan_file, FanFile, FanFileError};
use fank_core::ideal::{cone_ideal, reduce};
use fank_core::laurent::{euler_class, format_laurent, parse_laurent, LaurentPoly, ParseError};
use fank_core::piecewise::{
    clump_boundary_preimage, cone_boundary_image_test, cone_boundary_preimage,
    extend_over_smooth_fan, plp_validate, PlpError,
};
use fank_core::plpfile::{format_plp_file, load_plp_file, PlpFileError};
use fank_core::registry::{example_fan_text, RegistryError, EXAMPLES};
use fank_core::report::{
    fan_summary, property_flags, verdict_report, FailingPair, PlpReport, Report,
};

#[derive(Parser)]
#[command(
    name = "fank",
    version,
    about = "Equivariant K-theory of toric varieties: verdicts, ideals, and \
             piecewise Laurent polynomial constructions"
)]
struct Cli {
    /// Emit a machine-readable JSON report (schema 1)
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report a fan's property flags and singular cones
    Check {
        /// Fan file
        fan: PathBuf,
    },
    /// Decide whether equivariant K-theory matches the piecewise Laurent ring
    ///
    /// Exits 1 when the verdict is "not-isomorphic".
    Classify {
        /// Fan file (omit when using --batch)
        #[arg(required_unless_present = "batch")]
        fan: Option<PathBuf>,
        /// Classify every .fan file in a directory, in sorted-path order
        #[arg(long, conflicts_with = "fan")]
        batch: Option<PathBuf>,
    },
    /// Print the lattice ideal of a cone of the fan
    Ideal {
        /// Fan file
        fan: PathBuf,
        /// Maximal cone name, comma-separated ray names, or `0` for the origin
        cone: String,
    },
    /// Verify, extend, or take preimages of piecewise Laurent polynomials
    #[command(subcommand)]
    Plp(PlpCommand),
    /// List bundled example fans, or write one as a fan file
    Examples {
        /// Example name (omit to list all)
        name: Option<String>,
        /// Twist parameter for hirzebruch-r (at least 1, default 1)
        #[arg(long)]
        r: Option<i64>,
        /// Output path (default: <name>.fan in the working directory)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PlpCommand {
    /// Check all pairwise compatibilities of a PLP file
    ///
    /// Exits 2 when the values fail compatibility.
    Verify {
        /// PLP file
        plp: PathBuf,
    },
    /// Extend a PLP on a subfan to a smooth ambient fan
    Extend {
        /// PLP file over the subfan
        plp: PathBuf,
        /// Fan file of the smooth ambient fan
        ambient: PathBuf,
        /// Write the extended PLP file here (default: stdout via the report)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Construct a preimage under restriction-to-boundary, with a transcript
    ///
    /// Cone mode takes one Laurent expression per facet of the named cone;
    /// clump mode takes the two boundary-ray expressions. A tuple outside
    /// the image is reported (valid: false) without error.
    Preimage {
        /// Fan file
        fan: PathBuf,
        #[command(flatten)]
        target: PreimageTarget,
        /// Laurent expressions in a1..an
        values: Vec<String>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PreimageTarget {
    /// Maximal cone whose boundary the values live on
    #[arg(long)]
    cone: Option<String>,
    /// Treat the whole fan as a clump; values are the two boundary constraints
    #[arg(long)]
    clump: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Msg(String),
    #[error(transparent)]
    FanFile(#[from] FanFileError),
    #[error(transparent)]
    PlpFile(#[from] PlpFileError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Plp(#[from] PlpError),
    #[error("invalid Laurent expression: {0}")]
    Laurent(#[from] ParseError),
    #[error("cannot write `{path}`: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

fn msg<T>(m: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Msg(m.into()))
}

fn ms(t0: Instant) -> u64 {
    t0.elapsed().as_millis() as u64
}

/// Writes to stdout, treating a broken pipe as a normal early exit rather
/// than an internal invariant violation.
fn out(text: impl AsRef<str>) {
    use std::io::Write;
    let mut so = std::io::stdout().lock();
    if let Err(e) = so.write_all(text.as_ref().as_bytes()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(2);
    }
}

fn outln(text: impl AsRef<str>) {
    out(text.as_ref());
    out("\n");
}

fn emit(report: &Report, json: bool) {
    if json {
        outln(report.to_json());
    } else {
        out(report.render_text());
    }
}

fn load(path: &Path) -> Result<(FanFile, Arc<Fan>, Vec<String>), CliError> {
    let (ff, fan, warnings) = load_fan_file(path)?;
    Ok((
        ff,
        Arc::new(fan),
        warnings.iter().map(|w| w.to_string()).collect(),
    ))
}

fn cmd_check(path: &Path, json: bool) -> Result<i32, CliError> {
    let t0 = Instant::now();
    let (_ff, fan, warnings) = load(path)?;
    let mut report = Report::new("check");
    report.warnings = warnings;
    report.fan = Some(fan_summary(Some(&path.display().to_string()), &fan));
    report.properties = Some(property_flags(&fan));
    report.elapsed_ms = ms(t0);
    emit(&report, json);
    Ok(0)
}

fn classify_report(path: &Path) -> Result<(Report, Outcome), CliError> {
    let t0 = Instant::now();
    let (_ff, fan, warnings) = load(path)?;
    let verdict = classify(&fan)?;
    let outcome = verdict.outcome;
    let mut report = Report::new("classify");
    report.warnings = warnings;
    report.fan = Some(fan_summary(Some(&path.display().to_string()), &fan));
    report.verdict = Some(verdict_report(&verdict));
    report.elapsed_ms = ms(t0);
    Ok((report, outcome))
}

fn cmd_classify(path: &Path, json: bool) -> Result<i32, CliError> {
    let (report, outcome) = classify_report(path)?;
    emit(&report, json);
    Ok(if outcome == Outcome::NotIsomorphic { 1 } else { 0 })
}

fn cmd_classify_batch(dir: &Path, json: bool) -> Result<i32, CliError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::Msg(format!("cannot read directory `{}`: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "fan"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return msg(format!("no .fan files in `{}`", dir.display()));
    }
    type BatchEntry = (PathBuf, Result<(Report, Outcome), CliError>);
    let results: Vec<BatchEntry> = paths
        .par_iter()
        .map(|p| (p.clone(), classify_report(p)))
        .collect();

    let mut code = 0;
    if json {
        let mut entries = Vec::new();
        for (path, res) in &results {
            let path_str = path.display().to_string();
            match res {
                Ok((report, outcome)) => {
                    if *outcome == Outcome::NotIsomorphic {
                        code = code.max(1);
                    }
                    entries.push(serde_json::json!({ "path": path_str, "report": report }));
                }
                Err(e) => {
                    code = 2;
                    entries.push(serde_json::json!({ "path": path_str, "error": e.to_string() }));
                }
            }
        }
        outln(serde_json::to_string_pretty(&serde_json::Value::Array(entries)).unwrap());
    } else {
        for (path, res) in &results {
            outln(format!("== {}", path.display()));
            match res {
                Ok((report, outcome)) => {
                    if *outcome == Outcome::NotIsomorphic {
                        code = code.max(1);
                    }
                    out(report.render_text());
                }
                Err(e) => {
                    code = 2;
                    outln(format!("error: {e}"));
                }
            }
            outln("");
        }
    }
    Ok(code)
}

/// Resolves a cone argument: a maximal cone name, comma-separated ray names
/// spanning a face of the fan, or `0` for the origin cone.
fn resolve_cone(ff: &FanFile, fan: &Fan, spec: &str) -> Result<Cone, CliError> {
    if spec == "0" {
        return Ok(Cone::zero(fan.n));
    }
    if let Some(i) = ff.max_cone_index(fan, spec) {
        return Ok(fan.max_cones[i].clone());
    }
    let parts: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let mut coords = Vec::new();
    for part in &parts {
        match ff.ray_names.iter().position(|r| r == part) {
            Some(k) => coords.push(ff.ray_coords[k].clone()),
            None => {
                return msg(format!(
                    "unknown cone `{spec}`: use a maximal cone name, \
                     comma-separated ray names, or `0`"
                ))
            }
        }
    }
    let cone = cone_from_rays(fan.n, &coords)?;
    if !fan.contains_cone(&cone) {
        return msg(format!("rays `{spec}` do not span a cone of the fan"));
    }
    Ok(cone)
}

fn cmd_ideal(path: &Path, cone_spec: &str, json: bool) -> Result<i32, CliError> {
    let t0 = Instant::now();
    let (ff, fan, warnings) = load(path)?;
    let cone = resolve_cone(&ff, &fan, cone_spec)?;
    let ideal = cone_ideal(&cone);
    let mut report = Report::new("ideal");
    report.warnings = warnings;
    report.fan = Some(fan_summary(Some(&path.display().to_string()), &fan));
    report.ideal = Some(fank_core::report::IdealReport {
        cone: cone_spec.to_string(),
        exponents: ideal
            .generators
            .iter()
            .map(|nu| nu.iter().map(|x| x.to_string()).collect())
            .collect(),
        generators: ideal
            .generators
            .iter()
            .map(|nu| format_laurent(&euler_class(nu)))
            .collect(),
    });
    report.elapsed_ms = ms(t0);
    emit(&report, json);
    Ok(0)
}

fn cmd_plp_verify(path: &Path, json: bool) -> Result<i32, CliError> {
    let t0 = Instant::now();
    let doc = load_plp_file(path)?;
    let mut report = Report::new("plp-verify");
    report.warnings = doc.fan_warnings.iter().map(|w| w.to_string()).collect();
    report.fan = Some(fan_summary(
        Some(&doc.fan_path.display().to_string()),
        &doc.fan,
    ));
    let k = doc.fan.max_cones.len();
    let pairs = k * (k.saturating_sub(1)) / 2;
    let (code, plp) = match plp_validate(doc.fan.clone(), doc.values.clone()) {
        Ok(_) => (
            0,
            PlpReport {
                action: "verify".to_string(),
                valid: Some(true),
                failing_pair: None,
                output: None,
                preimage: None,
                transcript: vec![format!("checked {pairs} cone pair(s); all compatible")],
            },
        ),
        Err(PlpError::IncompatiblePair { i, j, witness }) => (
            2,
            PlpReport {
                action: "verify".to_string(),
                valid: Some(false),
                failing_pair: Some(FailingPair {
                    cone_i: doc.cone_names[i].clone(),
                    cone_j: doc.cone_names[j].clone(),
                    witness: format_laurent(&witness),
                }),
                output: None,
                preimage: None,
                transcript: Vec::new(),
            },
        ),
        Err(e) => return Err(e.into()),
    };
    report.plp = Some(plp);
    report.elapsed_ms = ms(t0);
    emit(&report, json);
    Ok(code)
}

fn cmd_plp_extend(
    plp_path: &Path,
    ambient_path: &Path,
    output: Option<&Path>,
    json: bool,
) -> Result<i32, CliError> {
    let t0 = Instant::now();
    let doc = load_plp_file(plp_path)?;
    let (aff, ambient, ambient_warnings) = load(ambient_path)?;
    let input = plp_validate(doc.fan.clone(), doc.values.clone())?;
    let extended = extend_over_smooth_fan(&input, ambient.clone())?;
    let names = aff.max_cone_names(&ambient);
    let text = format_plp_file(&ambient_path.display().to_string(), &names, &extended.values);

    let mut transcript = vec![
        format!(
            "extended {} cone value(s) to {} maximal cone(s)",
            doc.fan.max_cones.len(),
            ambient.max_cones.len()
        ),
        "re-verified: all pairwise compatibilities hold".to_string(),
    ];
    if let Some(out) = output {
        fs::write(out, &text).map_err(|source| CliError::Write {
            path: out.display().to_string(),
            source,
        })?;
        transcript.push(format!("wrote {}", out.display()));
    }
    let mut report = Report::new("plp-extend");
    report.warnings = ambient_warnings;
    report.fan = Some(fan_summary(
        Some(&ambient_path.display().to_string()),
        &ambient,
    ));
    report.plp = Some(PlpReport {
        action: "extend".to_string(),
        valid: Some(true),
        failing_pair: None,
        output: Some(text),
        preimage: None,
        transcript,
    });
    report.elapsed_ms = ms(t0);
    emit(&report, json);
    Ok(0)
}

fn facet_label(fan: &Fan, ray_names: &[String], facet: &Cone) -> String {
    let names: Vec<String> = facet
        .rays
        .iter()
        .map(|r| match fan.ray_index(r) {
            Some(k) => ray_names[k].clone(),
            None => format!("{r:?}"),
        })
        .collect();
    if names.is_empty() {
        "origin".to_string()
    } else {
        names.join(",")
    }
}

fn cone_preimage_report(
    ff: &FanFile,
    fan: &Fan,
    cone_name: &str,
    values: &[String],
) -> Result<PlpReport, CliError> {
    let Some(ci) = ff.max_cone_index(fan, cone_name) else {
        return msg(format!("unknown maximal cone `{cone_name}`"));
    };
    let cone = &fan.max_cones[ci];
    let facets = cone.facets();
    let ray_names = ff.fan_ray_names(fan);
    if values.len() != facets.len() {
        let listing: Vec<String> = facets
            .iter()
            .enumerate()
            .map(|(i, f)| format!("facet {i}: {}", facet_label(fan, &ray_names, f)))
            .collect();
        return msg(format!(
            "cone `{cone_name}` has {} facet(s), got {} value(s)\n{}",
            facets.len(),
            values.len(),
            listing.join("\n")
        ));
    }
    let tuple: Vec<LaurentPoly> = values
        .iter()
        .map(|s| parse_laurent(s, fan.n))
        .collect::<Result<_, _>>()?;

    let mut transcript = Vec::new();
    for (i, facet) in facets.iter().enumerate() {
        transcript.push(format!(
            "facet {i} ({}): value {}",
            facet_label(fan, &ray_names, facet),
            format_laurent(&tuple[i])
        ));
    }
    // plain compatibility: congruence across each pairwise intersection
    let mut plain = true;
    for i in 0..facets.len() {
        for j in (i + 1)..facets.len() {
            let common = intersect(&facets[i], &facets[j])?;
            let residue = reduce(&(&tuple[i] - &tuple[j]), &cone_ideal(&common));
            if !residue.is_zero() {
                plain = false;
                transcript.push(format!(
                    "plain compatibility fails on facets {i},{j}: residue {}",
                    format_laurent(&residue)
                ));
            }
        }
    }
    if plain {
        transcript.push("plain pairwise compatibility: pass".to_string());
    }
    let in_image = plain && cone_boundary_image_test(&tuple, cone);
    transcript.push(format!(
        "image test (differences in pairwise facet-ideal sums): {}",
        if in_image { "pass" } else { "fail" }
    ));

    match cone_boundary_preimage(&tuple, cone) {
        Ok(pre) => {
            for (i, facet) in facets.iter().enumerate() {
                let residue = reduce(&(&pre - &tuple[i]), &cone_ideal(facet));
                assert!(residue.is_zero(), "preimage postcondition");
                transcript.push(format!(
                    "verified: preimage = value mod ideal of facet {i} ({})",
                    facet_label(fan, &ray_names, facet)
                ));
            }
            Ok(PlpReport {
                action: "preimage".to_string(),
                valid: Some(true),
                failing_pair: None,
                output: None,
                preimage: Some(format_laurent(&pre)),
                transcript,
            })
        }
        Err(PlpError::NotInImage { witness }) => {
            transcript.push("no preimage exists; the tuple is outside the image".to_string());
            Ok(PlpReport {
                action: "preimage".to_string(),
                valid: Some(false),
                failing_pair: None,
                output: None,
                preimage: None,
                transcript: {
                    transcript.push(format!("witness residue: {}", format_laurent(&witness)));
                    transcript
                },
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn clump_preimage_report(
    ff: &FanFile,
    fan: &Arc<Fan>,
    fan_path: &Path,
    values: &[String],
) -> Result<PlpReport, CliError> {
    if values.len() != 2 {
        return msg(format!(
            "clump mode takes exactly 2 values (start and end boundary constraints), got {}",
            values.len()
        ));
    }
    let clump = clump_structure(fan)?;
    let f = parse_laurent(&values[0], fan.n)?;
    let g = parse_laurent(&values[1], fan.n)?;
    let ray_names = ff.fan_ray_names(fan);
    let boundary_name = |v: &[num_bigint::BigInt]| -> String {
        fan.ray_index(v)
            .map(|k| ray_names[k].clone())
            .unwrap_or_else(|| format!("{v:?}"))
    };
    let mut transcript = vec![format!(
        "clump with {} cone(s); boundary rays {} and {}",
        clump.len(),
        boundary_name(&clump.rays[0]),
        boundary_name(&clump.rays[clump.len()])
    )];
    match clump_boundary_preimage(&f, &g, &clump) {
        Ok(pp) => {
            // map the chain-ordered values back to the input fan's cone names
            let names = ff.max_cone_names(fan);
            let mut file_values = vec![LaurentPoly::zero(fan.n); fan.max_cones.len()];
            for (i, cone) in pp.fan.max_cones.iter().enumerate() {
                let k = fan
                    .max_cones
                    .iter()
                    .position(|c| c == cone)
                    .expect("clump cone comes from the fan");
                file_values[k] = pp.values[i].clone();
            }
            let text = format_plp_file(&fan_path.display().to_string(), &names, &file_values);
            transcript.push("verified: start value matches f at the first boundary ray".into());
            transcript.push("verified: end value matches g at the last boundary ray".into());
            Ok(PlpReport {
                action: "preimage".to_string(),
                valid: Some(true),
                failing_pair: None,
                output: Some(text),
                preimage: None,
                transcript,
            })
        }
        Err(PlpError::NotInImage { witness }) => {
            transcript.push("no preimage exists; f - g is outside the boundary ideal sum".into());
            transcript.push(format!("witness residue: {}", format_laurent(&witness)));
            Ok(PlpReport {
                action: "preimage".to_string(),
                valid: Some(false),
                failing_pair: None,
                output: None,
                preimage: None,
                transcript,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_plp_preimage(
    fan_path: &Path,
    target: &PreimageTarget,
    values: &[String],
    json: bool,
) -> Result<i32, CliError> {
    let t0 = Instant::now();
    let (ff, fan, warnings) = load(fan_path)?;
    let plp = match (&target.cone, target.clump) {
        (Some(name), false) => cone_preimage_report(&ff, &fan, name, values)?,
        (None, true) => clump_preimage_report(&ff, &fan, fan_path, values)?,
        _ => unreachable!("clap enforces the target group"),
    };
    let mut report = Report::new("plp-preimage");
    report.warnings = warnings;
    report.fan = Some(fan_summary(Some(&fan_path.display().to_string()), &fan));
    report.plp = Some(plp);
    report.elapsed_ms = ms(t0);
    emit(&report, json);
    Ok(0)
}

fn cmd_examples(
    name: Option<&str>,
    r: Option<i64>,
    output: Option<&Path>,
    json: bool,
) -> Result<i32, CliError> {
    match name {
        None => {
            if json {
                let entries: Vec<serde_json::Value> = EXAMPLES
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "name": e.name,
                            "summary": e.summary,
                            "parametric": e.parametric,
                        })
                    })
                    .collect();
                outln(
                    serde_json::to_string_pretty(&serde_json::json!({
                        "schema": fank_core::report::SCHEMA_VERSION,
                        "command": "examples",
                        "examples": entries,
                    }))
                    .unwrap(),
                );
            } else {
                for e in EXAMPLES {
                    outln(format!("{:<22} {}", e.name, e.summary));
                }
            }
            Ok(0)
        }
        Some(name) => {
            let text = example_fan_text(name, r)?;
            let default_name = if name == "hirzebruch-r" {
                format!("hirzebruch-{}.fan", r.unwrap_or(1))
            } else {
                format!("{name}.fan")
            };
            let path = output
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from(default_name));
            fs::write(&path, &text).map_err(|source| CliError::Write {
                path: path.display().to_string(),
                source,
            })?;
            if json {
                outln(
                    serde_json::to_string_pretty(&serde_json::json!({
                        "schema": fank_core::report::SCHEMA_VERSION,
                        "command": "examples",
                        "name": name,
                        "path": path.display().to_string(),
                    }))
                    .unwrap(),
                );
            } else {
                outln(format!("wrote {}", path.display()));
            }
            Ok(0)
        }
    }
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check { fan } => cmd_check(fan, cli.json),
        Command::Classify { fan, batch } => match (fan, batch) {
            (Some(path), None) => cmd_classify(path, cli.json),
            (None, Some(dir)) => cmd_classify_batch(dir, cli.json),
            _ => unreachable!("clap enforces fan xor batch"),
        },
        Command::Ideal { fan, cone } => cmd_ideal(fan, cone, cli.json),
        Command::Plp(sub) => match sub {
            PlpCommand::Verify { plp } => cmd_plp_verify(plp, cli.json),
            PlpCommand::Extend {
                plp,
                ambient,
                output,
            } => cmd_plp_extend(plp, ambient, output.as_deref(), cli.json),
            PlpCommand::Preimage {
                fan,
                target,
                values,
            } => cmd_plp_preimage(fan, target, values, cli.json),
        },
        Command::Examples { name, r, output } => {
            cmd_examples(name.as_deref(), *r, output.as_deref(), cli.json)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&cli)));
    let code = match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            2
        }
        Err(_) => {
            eprintln!("error: internal invariant violation");
            3
        }
    };
    std::process::exit(code);
}
