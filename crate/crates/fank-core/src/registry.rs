//! Bundled example fans.
//!
//! Nine named fans covering every verdict branch of the classifier: smooth
//! complete surfaces, a weighted and a fake projective plane, and singular
//! three-dimensional fans whose singular cones are distant, or isolated but
//! not distant. Each example is stored as fan file text so the CLI can list
//! and materialize it verbatim.

use thiserror::Error;

use crate::fan::Fan;
use crate::fanfile::{parse_fan_text, FanFileError};

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("unknown example `{0}`; run `fank examples` for the list")]
    UnknownExample(String),
    #[error("example `{0}` is not parametric; omit --r")]
    NotParametric(String),
    #[error("hirzebruch-r needs --r at least 1, got {0}")]
    BadParameter(i64),
    #[error(transparent)]
    File(#[from] FanFileError),
}

pub struct ExampleInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub parametric: bool,
}

pub const EXAMPLES: &[ExampleInfo] = &[
    ExampleInfo {
        name: "hirzebruch-r",
        summary: "smooth complete surface, ruled over the projective line (--r sets the twist, default 1)",
        parametric: true,
    },
    ExampleInfo {
        name: "p2",
        summary: "projective plane",
        parametric: false,
    },
    ExampleInfo {
        name: "wps-1-1-2",
        summary: "weighted projective plane P(1,1,2) with one singular cone",
        parametric: false,
    },
    ExampleInfo {
        name: "fake-p2",
        summary: "fake weighted projective plane whose rays span an index-3 sublattice",
        parametric: false,
    },
    ExampleInfo {
        name: "pyramid",
        summary: "normal fan of a square-based pyramid; one non-simplicial singular cone",
        parametric: false,
    },
    ExampleInfo {
        name: "simplicial-distant",
        summary: "complete simplicial 3D fan with a distant singular cone",
        parametric: false,
    },
    ExampleInfo {
        name: "two-distant",
        summary: "complete non-polytopal 3D fan with two distant singular cones",
        parametric: false,
    },
    ExampleInfo {
        name: "isolated-not-distant",
        summary: "complete 3D fan whose singular cones are all isolated but not distant",
        parametric: false,
    },
    ExampleInfo {
        name: "gt-flag3",
        summary: "toric degeneration of the full flag variety in C^3; one distant singular cone",
        parametric: false,
    },
];

const P2: &str = "\
# projective plane
dim 2
ray rho1  1  0
ray rho2  0  1
ray rho3 -1 -1
cone sigma1 rho1 rho2
cone sigma2 rho2 rho3
cone sigma3 rho3 rho1
";

const WPS112: &str = "\
# weighted projective plane P(1,1,2): rays satisfy rho1 + rho2 + 2 rho3 = 0
dim 2
ray rho1  1  0
ray rho2 -1  2
ray rho3  0 -1
cone sigma1 rho1 rho2
cone sigma2 rho2 rho3
cone sigma3 rho3 rho1
";

const FAKE_P2: &str = "\
# fake weighted projective plane: rays span an index-3 sublattice
dim 2
ray rho1  1  2
ray rho2  1 -1
ray rho3 -2 -1
cone sigma1 rho1 rho2
cone sigma2 rho2 rho3
cone sigma3 rho3 rho1
";

const PYRAMID: &str = "\
# normal fan of a square-based pyramid; C1 is the non-simplicial base cone
dim 3
ray R1  1  0  1
ray R2  0  1  1
ray R3 -1  0  1
ray R4  0 -1  1
ray R5  0  0 -1
cone C1 R1 R2 R3 R4
cone C2 R1 R2 R5
cone C3 R1 R4 R5
cone C4 R2 R3 R5
cone C5 R3 R4 R5
";

const SIMPLICIAL_DISTANT: &str = "\
# complete simplicial fan with one singular maximal cone, vacuously distant
dim 3
ray rho1  1  0  2
ray rho2  0  1  2
ray rho3 -1 -1  1
ray rho4  0  0 -1
cone sigma1 rho1 rho2 rho3
cone sigma2 rho1 rho2 rho4
cone sigma3 rho1 rho3 rho4
cone sigma4 rho2 rho3 rho4
";

const TWO_DISTANT: &str = "\
# complete fan with two non-simplicial cones over squares at the poles,
# joined by a belt of smooth simplicial cones; not polytopal
dim 3
ray rho1   1  0  1
ray rho2   0  1  1
ray rho3  -1  0  1
ray rho4   0 -1  1
ray rho5   1  0 -1
ray rho6   0  1 -1
ray rho7  -1  0 -1
ray rho8   0 -1 -1
ray rho9   1  0  0
ray rho10  0  1  0
ray rho11 -1  0  0
ray rho12  0 -1  0
cone sigma1  rho1 rho2 rho3 rho4
cone sigma2  rho5 rho6 rho7 rho8
cone sigma3  rho1 rho2 rho9
cone sigma4  rho2 rho9 rho10
cone sigma5  rho2 rho3 rho10
cone sigma6  rho3 rho10 rho11
cone sigma7  rho3 rho4 rho11
cone sigma8  rho4 rho11 rho12
cone sigma9  rho1 rho4 rho12
cone sigma10 rho1 rho9 rho12
cone sigma11 rho5 rho6 rho9
cone sigma12 rho6 rho9 rho10
cone sigma13 rho6 rho7 rho10
cone sigma14 rho7 rho10 rho11
cone sigma15 rho7 rho8 rho11
cone sigma16 rho8 rho11 rho12
cone sigma17 rho5 rho8 rho12
cone sigma18 rho5 rho9 rho12
";

const ISOLATED_NOT_DISTANT: &str = "\
# complete fan built entirely from non-simplicial cones over squares;
# every maximal cone is an isolated singular cone, none is distant
dim 3
ray rho1   1  0  1
ray rho2   0  1  1
ray rho3  -1  0  1
ray rho4   0 -1  1
ray rho5   1  0 -1
ray rho6   0  1 -1
ray rho7  -1  0 -1
ray rho8   0 -1 -1
ray rho9   1  0  0
ray rho10  0  1  0
ray rho11 -1  0  0
ray rho12  0 -1  0
cone sigma1  rho1 rho4 rho9 rho12
cone sigma2  rho1 rho2 rho9 rho10
cone sigma3  rho2 rho3 rho10 rho11
cone sigma4  rho3 rho4 rho11 rho12
cone sigma5  rho5 rho8 rho9 rho12
cone sigma6  rho5 rho6 rho9 rho10
cone sigma7  rho6 rho7 rho10 rho11
cone sigma8  rho7 rho8 rho11 rho12
cone sigma9  rho1 rho2 rho3 rho4
cone sigma10 rho5 rho6 rho7 rho8
";

const GT_FLAG3: &str = "\
# toric degeneration of the full flag variety Flags(C^3); sigma5 is the
# single singular cone
dim 3
ray rho1 -1  0  0
ray rho2  1  0  0
ray rho3  0 -1  0
ray rho4  0  1  0
ray rho5  1  0 -1
ray rho6  0 -1  1
cone sigma1 rho1 rho3 rho5
cone sigma2 rho1 rho3 rho6
cone sigma3 rho1 rho4 rho5
cone sigma4 rho1 rho4 rho6
cone sigma5 rho2 rho3 rho5 rho6
cone sigma6 rho2 rho4 rho5
cone sigma7 rho2 rho4 rho6
";

fn hirzebruch_text(r: i64) -> String {
    format!(
        "# smooth complete surface: twist-{r} ruled surface over the projective line\n\
         dim 2\n\
         ray rho1  1  0\n\
         ray rho2  0  1\n\
         ray rho3 -1  {r}\n\
         ray rho4  0 -1\n\
         cone sigma1 rho1 rho2\n\
         cone sigma2 rho2 rho3\n\
         cone sigma3 rho3 rho4\n\
         cone sigma4 rho4 rho1\n"
    )
}

/// Fan file text of the named example. `r` applies to parametric examples
/// only (`hirzebruch-r`, default 1).
pub fn example_fan_text(name: &str, r: Option<i64>) -> Result<String, RegistryError> {
    let fixed = |text: &str| -> Result<String, RegistryError> {
        match r {
            Some(_) => Err(RegistryError::NotParametric(name.to_string())),
            None => Ok(text.to_string()),
        }
    };
    match name {
        "hirzebruch-r" => {
            let r = r.unwrap_or(1);
            if r < 1 {
                return Err(RegistryError::BadParameter(r));
            }
            Ok(hirzebruch_text(r))
        }
        "p2" => fixed(P2),
        "wps-1-1-2" => fixed(WPS112),
        "fake-p2" => fixed(FAKE_P2),
        "pyramid" => fixed(PYRAMID),
        "simplicial-distant" => fixed(SIMPLICIAL_DISTANT),
        "two-distant" => fixed(TWO_DISTANT),
        "isolated-not-distant" => fixed(ISOLATED_NOT_DISTANT),
        "gt-flag3" => fixed(GT_FLAG3),
        other => Err(RegistryError::UnknownExample(other.to_string())),
    }
}

/// The named example as a validated fan. Bundled data is canonical: building
/// it must produce no warnings.
pub fn example_fan(name: &str, r: Option<i64>) -> Result<Fan, RegistryError> {
    let text = example_fan_text(name, r)?;
    let ff = parse_fan_text(&text)?;
    let (fan, warnings) = ff.build().map_err(FanFileError::Fan)?;
    assert!(
        warnings.is_empty(),
        "bundled example `{name}` is not canonical: {warnings:?}"
    );
    Ok(fan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, Outcome};
    use num_bigint::BigInt;

    fn flags(fan: &Fan) -> (bool, bool, bool, bool) {
        (
            fan.is_smooth(),
            fan.is_complete(),
            fan.is_simplicial(),
            fan.is_polytopal().unwrap(),
        )
    }

    #[test]
    fn every_example_parses_and_validates() {
        for info in EXAMPLES {
            let fan = example_fan(info.name, None).unwrap();
            assert!(fan.is_complete(), "{} should be complete", info.name);
        }
    }

    #[test]
    fn unknown_and_misparameterized_names_are_rejected() {
        assert!(matches!(
            example_fan_text("p3", None),
            Err(RegistryError::UnknownExample(_))
        ));
        assert!(matches!(
            example_fan_text("p2", Some(2)),
            Err(RegistryError::NotParametric(_))
        ));
        assert!(matches!(
            example_fan_text("hirzebruch-r", Some(0)),
            Err(RegistryError::BadParameter(0))
        ));
    }

    #[test]
    fn hirzebruch_parameter_changes_one_ray() {
        for r in 1..=3 {
            let fan = example_fan("hirzebruch-r", Some(r)).unwrap();
            assert_eq!(fan.rays.len(), 4);
            assert_eq!(fan.max_cones.len(), 4);
            assert!(fan.is_smooth() && fan.is_complete());
            assert_eq!(fan.rays[2], vec![BigInt::from(-1), BigInt::from(r)]);
        }
        let default = example_fan("hirzebruch-r", None).unwrap();
        assert_eq!(default, example_fan("hirzebruch-r", Some(1)).unwrap());
    }

    #[test]
    fn surface_examples_have_expected_singularities() {
        assert!(example_fan("p2", None).unwrap().is_smooth());
        let wps = example_fan("wps-1-1-2", None).unwrap();
        let report = wps.singularity_report();
        assert_eq!(report.singular_cones.len(), 1);
        let fake = example_fan("fake-p2", None).unwrap();
        assert_eq!(fake.singularity_report().singular_cones.len(), 3);
    }

    #[test]
    fn pyramid_matches_its_session_transcript() {
        let fan = example_fan("pyramid", None).unwrap();
        assert_eq!(fan.rays.len(), 5);
        assert_eq!(fan.max_cones.len(), 5);
        assert_eq!(flags(&fan), (false, true, false, true));
        // the base cone is the only singular one; all four of its walls with
        // the side cones are smooth
        let report = fan.singularity_report();
        assert_eq!(report.singular_cones.len(), 1);
        assert_eq!(report.singular_cones[0].dim, 3);
        assert!(report.all_isolated && report.all_distant);
    }

    #[test]
    fn simplicial_distant_flags() {
        let fan = example_fan("simplicial-distant", None).unwrap();
        assert_eq!(flags(&fan), (false, true, true, true));
        // exactly one maximal cone is singular (its ray matrix has index 5)
        let report = fan.singularity_report();
        assert!(report.all_distant);
        assert_eq!(report.singular_cones.len(), 1);
        assert_eq!(report.singular_cones[0].dim, 3);
    }

    #[test]
    fn two_distant_flags() {
        let fan = example_fan("two-distant", None).unwrap();
        assert_eq!(fan.rays.len(), 12);
        assert_eq!(fan.max_cones.len(), 18);
        assert_eq!(flags(&fan), (false, true, false, false));
        let report = fan.singularity_report();
        assert!(report.all_distant);
        assert_eq!(report.singular_cones.len(), 2);
    }

    #[test]
    fn isolated_not_distant_flags() {
        let fan = example_fan("isolated-not-distant", None).unwrap();
        assert_eq!(fan.rays.len(), 12);
        assert_eq!(fan.max_cones.len(), 10);
        assert_eq!(flags(&fan), (false, true, false, true));
        let report = fan.singularity_report();
        assert!(report.all_isolated);
        assert!(!report.all_distant);
        assert!(report.singular_cones.iter().all(|c| !c.distant));
        // every maximal cone is an isolated singular cone
        assert_eq!(
            report.singular_cones.iter().filter(|c| c.isolated).count(),
            10
        );
    }

    #[test]
    fn gt_flag3_flags() {
        let fan = example_fan("gt-flag3", None).unwrap();
        assert_eq!(fan.rays.len(), 6);
        assert_eq!(fan.max_cones.len(), 7);
        assert!(fan
            .ray_index(&[BigInt::from(1), BigInt::from(0), BigInt::from(-1)])
            .is_some());
        assert!(fan
            .ray_index(&[BigInt::from(0), BigInt::from(-1), BigInt::from(1)])
            .is_some());
        assert_eq!(flags(&fan), (false, true, false, true));
        let report = fan.singularity_report();
        assert_eq!(report.singular_cones.len(), 1);
        assert_eq!(report.singular_cones[0].rays.len(), 4);
        assert!(report.all_distant && report.all_isolated);
    }

    #[test]
    fn verdict_spot_checks() {
        assert_eq!(
            classify(&example_fan("two-distant", None).unwrap())
                .unwrap()
                .outcome,
            Outcome::Isomorphic
        );
        assert_eq!(
            classify(&example_fan("fake-p2", None).unwrap())
                .unwrap()
                .outcome,
            Outcome::NotIsomorphic
        );
        assert_eq!(
            classify(&example_fan("isolated-not-distant", None).unwrap())
                .unwrap()
                .outcome,
            Outcome::Unknown
        );
    }

    #[test]
    fn listing_metadata_is_consistent() {
        assert_eq!(EXAMPLES.len(), 9);
        for info in EXAMPLES {
            assert_eq!(info.parametric, info.name == "hirzebruch-r");
            assert!(!info.summary.is_empty());
        }
    }
}
