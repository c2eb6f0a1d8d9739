//! The function corpus the experiment harness draws from: piecewise smooth
//! targets with registered singularity locations and closed-form derivatives
//! where they exist.

use crate::error::{Error, Result};
use crate::interval::Interval;

/// What kind of isolated singularity sits at a registered location.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    /// `f` itself is discontinuous.
    Jump,
    /// `f` is continuous but `f'` is not.
    Point,
}

#[derive(Debug, Clone, Copy)]
pub struct Singularity {
    pub location: f64,
    pub kind: SingularityKind,
}

/// A corpus entry: the target function, its host interval, its singularities,
/// and successive derivatives where closed forms exist (`derivatives[i]` is
/// the `(i+1)`-th derivative).
#[derive(Debug, Clone)]
pub struct CorpusFunction {
    pub id: &'static str,
    pub f: fn(f64) -> f64,
    pub interval: Interval,
    pub singularities: Vec<Singularity>,
    pub derivatives: Vec<fn(f64) -> f64>,
}

/// Piecewise smooth target with a jump at `x = -0.4` and a square-root point
/// singularity at `x = 0.4`: cubic left of the jump, shifted quadratic in the
/// middle, `1.16 - sqrt(x - 0.4)` on the right.
pub fn jump_sqrt(x: f64) -> f64 {
    if x < -0.4 {
        x * x * x
    } else if x < 0.4 {
        x * x + 1.0
    } else {
        1.16 - (x - 0.4).sqrt()
    }
}

pub fn x_abs_x(x: f64) -> f64 {
    x * x.abs()
}

fn x_abs_x_d1(x: f64) -> f64 {
    2.0 * x.abs()
}

fn x_abs_x_d2(x: f64) -> f64 {
    2.0 * x.signum()
}

fn abs_x(x: f64) -> f64 {
    x.abs()
}

fn abs_x_d1(x: f64) -> f64 {
    x.signum()
}

fn sign_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum()
    }
}

fn exp_x(x: f64) -> f64 {
    x.exp()
}

fn cube(x: f64) -> f64 {
    x * x * x
}

fn cube_d1(x: f64) -> f64 {
    3.0 * x * x
}

fn cube_d2(x: f64) -> f64 {
    6.0 * x
}

fn cube_d3(_: f64) -> f64 {
    6.0
}

fn near_pole(x: f64) -> f64 {
    (1.1 - x).recip()
}

fn near_pole_d1(x: f64) -> f64 {
    (1.1 - x).powi(-2)
}

/// The standard corpus, with singularity registrations verified by one-sided
/// difference probes.
#[derive(Debug, Clone)]
pub struct Corpus {
    entries: Vec<CorpusFunction>,
}

impl Corpus {
    pub fn standard() -> Corpus {
        let unit = Interval::new(-1.0, 1.0).unwrap();
        let entries = vec![
            CorpusFunction {
                id: "jump_sqrt",
                f: jump_sqrt,
                interval: unit,
                singularities: vec![
                    Singularity {
                        location: -0.4,
                        kind: SingularityKind::Jump,
                    },
                    Singularity {
                        location: 0.4,
                        kind: SingularityKind::Point,
                    },
                ],
                derivatives: vec![],
            },
            CorpusFunction {
                id: "xabsx",
                f: x_abs_x,
                interval: unit,
                singularities: vec![],
                derivatives: vec![x_abs_x_d1, x_abs_x_d2],
            },
            CorpusFunction {
                id: "absx",
                f: abs_x,
                interval: unit,
                singularities: vec![Singularity {
                    location: 0.0,
                    kind: SingularityKind::Point,
                }],
                derivatives: vec![abs_x_d1],
            },
            CorpusFunction {
                id: "sign",
                f: sign_x,
                interval: unit,
                singularities: vec![Singularity {
                    location: 0.0,
                    kind: SingularityKind::Jump,
                }],
                derivatives: vec![],
            },
            CorpusFunction {
                id: "exp",
                f: exp_x,
                interval: unit,
                singularities: vec![],
                derivatives: vec![exp_x, exp_x, exp_x, exp_x],
            },
            CorpusFunction {
                id: "cube",
                f: cube,
                interval: unit,
                singularities: vec![],
                derivatives: vec![cube_d1, cube_d2, cube_d3],
            },
            CorpusFunction {
                id: "nearpole",
                f: near_pole,
                interval: unit,
                singularities: vec![],
                derivatives: vec![near_pole_d1],
            },
        ];
        let corpus = Corpus { entries };
        corpus
            .verify()
            .expect("standard corpus failed singularity verification");
        corpus
    }

    pub fn get(&self, id: &str) -> Option<&CorpusFunction> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn entries(&self) -> &[CorpusFunction] {
        &self.entries
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.entries.iter().map(|e| e.id).collect()
    }

    /// Checks id uniqueness and probes every registered singularity with
    /// one-sided differences: a jump must show a persistent gap in `f`, a
    /// point singularity must be continuous with mismatched one-sided slopes.
    pub fn verify(&self) -> Result<()> {
        for (i, e) in self.entries.iter().enumerate() {
            if self.entries[..i].iter().any(|other| other.id == e.id) {
                return Err(Error::InvalidArgument(format!("duplicate corpus id {}", e.id)));
            }
            for s in &e.singularities {
                if s.location <= e.interval.a() || s.location >= e.interval.b() {
                    return Err(Error::InvalidArgument(format!(
                        "{}: singularity {} not strictly inside the interval",
                        e.id, s.location
                    )));
                }
                let h = 1e-7;
                let (x0, f) = (s.location, e.f);
                let gap = (f(x0 + h) - f(x0 - h)).abs();
                match s.kind {
                    SingularityKind::Jump => {
                        if gap < 1e-3 {
                            return Err(Error::InvalidArgument(format!(
                                "{}: no jump detected at {}",
                                e.id, x0
                            )));
                        }
                    }
                    SingularityKind::Point => {
                        let slope_r = (f(x0 + h) - f(x0)) / h;
                        let slope_l = (f(x0) - f(x0 - h)) / h;
                        if gap > 1e-3 || (slope_r - slope_l).abs() < 0.5 {
                            return Err(Error::InvalidArgument(format!(
                                "{}: no derivative break detected at {}",
                                e.id, x0
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_corpus_verifies() {
        let corpus = Corpus::standard();
        assert!(corpus.get("jump_sqrt").is_some());
        assert!(corpus.get("missing").is_none());
        assert_eq!(
            corpus.ids().len(),
            corpus.entries().len(),
            "ids must be unique"
        );
    }

    #[test]
    fn jump_sqrt_branch_values() {
        assert_eq!(jump_sqrt(-0.5), -0.125);
        assert_eq!(jump_sqrt(0.0), 1.0);
        // Continuous at the point singularity: both sides give 1.16.
        assert!((jump_sqrt(0.4) - 1.16).abs() < 1e-15);
        assert!((jump_sqrt(0.4 - 1e-12) - 1.16).abs() < 1e-11);
        // Jump at -0.4: cubic from the left, quadratic + 1 from the right.
        assert!((jump_sqrt(-0.4 - 1e-12) - -0.064).abs() < 1e-11);
        assert!((jump_sqrt(-0.4) - 1.16).abs() < 1e-15);
    }

    #[test]
    fn misregistered_singularity_is_caught() {
        let mut corpus = Corpus::standard();
        corpus.entries[0].singularities[0].location = 0.1; // smooth spot
        assert!(corpus.verify().is_err());
    }
}
