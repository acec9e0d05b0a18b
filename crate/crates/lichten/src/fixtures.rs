//! Built-in fixture catalogue.
//!
//! Each fixture is a named set of expression strings — the same grammar the
//! CLI accepts — plus optional extras: a coupling 2-form and weight for the
//! paired complexes, an affine map for relative runs, a partition function,
//! and declared zeros of `f` on circle models. Resolution parses the
//! expressions, validates the twist, checks that `f`, `theta` and `omega`
//! are real-valued, and confirms each declared zero by exact evaluation.

use num::BigRational;
use num::Zero;

use crate::constructions::PartitionFixture;
use crate::form::{AffineTorusMap, DifferentialForm};
use crate::lck::LckFixture;
use crate::parse::{parse_form, parse_poly};
use crate::relative::RelativeComplex;
use crate::trig::TrigPoly;
use crate::twist::TwistData;
use crate::{Error, Result};

/// Catalogue entry: everything is source text, nothing is parsed until
/// [`resolve`] runs.
#[derive(Debug, Clone, Copy)]
pub struct FixtureSpec {
    pub name: &'static str,
    pub summary: &'static str,
    pub dim: usize,
    pub f: &'static str,
    pub theta: &'static str,
    /// Coupling 2-form for the paired complexes.
    pub omega: Option<&'static str>,
    /// Weight (the rational m with theta0 = m theta, theta1 = (m+1) theta).
    pub m: Option<&'static str>,
    /// Affine torus map in `"A;b"` notation for relative runs.
    pub map: Option<&'static str>,
    /// First partition function; the second is its complement to 1.
    pub partition: Option<&'static str>,
    /// Zeros of `f`, declared as quarter-turn points. `Some(&[])` declares
    /// that `f` has no zeros; `None` declares nothing.
    pub zeros: Option<&'static [&'static [i64]]>,
}

const CATALOGUE: &[FixtureSpec] = &[
    FixtureSpec {
        name: "circle-cos",
        summary: "circle, f = cos(t1), theta = dt1; f vanishes twice",
        dim: 1,
        f: "cos(t1)",
        theta: "dt1",
        omega: None,
        m: None,
        map: None,
        partition: None,
        zeros: Some(&[&[1], &[3]]),
    },
    FixtureSpec {
        name: "circle-cos-2dt",
        summary: "circle, f = cos(t1), theta = 2dt1; f vanishes twice",
        dim: 1,
        f: "cos(t1)",
        theta: "2*dt1",
        omega: None,
        m: None,
        map: None,
        partition: None,
        zeros: Some(&[&[1], &[3]]),
    },
    FixtureSpec {
        name: "circle-sin",
        summary: "circle, f = sin(t1), theta = dt1; f vanishes twice",
        dim: 1,
        f: "sin(t1)",
        theta: "dt1",
        omega: None,
        m: None,
        map: None,
        partition: None,
        zeros: Some(&[&[0], &[2]]),
    },
    FixtureSpec {
        name: "circle-shifted-cos",
        summary: "circle, f = 2 + cos(t1) (nonvanishing), theta = dt1",
        dim: 1,
        f: "2 + cos(t1)",
        theta: "dt1",
        omega: None,
        m: None,
        map: None,
        partition: None,
        zeros: Some(&[]),
    },
    FixtureSpec {
        name: "derham-t2",
        summary: "2-torus, f = 1, theta = 0: the plain de Rham complex",
        dim: 2,
        f: "1",
        theta: "0",
        omega: None,
        m: None,
        map: None,
        partition: None,
        zeros: Some(&[]),
    },
    FixtureSpec {
        name: "novikov-t2",
        summary: "2-torus, f = 1, theta = dt1: constant twist, vanishing cohomology",
        dim: 2,
        f: "1",
        theta: "dt1",
        omega: None,
        m: None,
        map: None,
        partition: None,
        zeros: Some(&[]),
    },
    FixtureSpec {
        name: "identity-relative",
        summary: "identity self-map of the circle-cos model; relative groups vanish",
        dim: 1,
        f: "cos(t1)",
        theta: "dt1",
        omega: None,
        m: None,
        map: Some("1;0"),
        partition: None,
        zeros: Some(&[&[1], &[3]]),
    },
    FixtureSpec {
        name: "doubling-relative",
        summary: "doubling self-map of the circle-cos model",
        dim: 1,
        f: "cos(t1)",
        theta: "dt1",
        omega: None,
        m: None,
        map: Some("2;0"),
        partition: None,
        zeros: Some(&[&[1], &[3]]),
    },
    FixtureSpec {
        name: "lck-t4",
        summary: "4-torus, f = 2, theta = 0, omega = dt1 ^ dt2, weight m = 1",
        dim: 4,
        f: "2",
        theta: "0",
        omega: Some("dt1 ∧ dt2"),
        m: Some("1"),
        map: None,
        partition: None,
        zeros: Some(&[]),
    },
    FixtureSpec {
        name: "lck-t2-exact",
        summary: "2-torus, f = 2, theta = dt1, omega = dt1 ^ dt2 with f^2 omega exact, m = 0",
        dim: 2,
        f: "2",
        theta: "dt1",
        omega: Some("dt1 ∧ dt2"),
        m: Some("0"),
        map: None,
        partition: None,
        zeros: Some(&[]),
    },
    FixtureSpec {
        name: "twisted-circle",
        summary: "circle-cos model for the non-squaring operator",
        dim: 1,
        f: "cos(t1)",
        theta: "dt1",
        omega: None,
        m: None,
        map: None,
        partition: None,
        zeros: Some(&[&[1], &[3]]),
    },
    FixtureSpec {
        name: "twisted-t2",
        summary: "2-torus, f = cos(t1), theta = dt2; dimensions do not stabilize",
        dim: 2,
        f: "cos(t1)",
        theta: "dt2",
        omega: None,
        m: None,
        map: None,
        partition: None,
        zeros: None,
    },
    FixtureSpec {
        name: "mv-partition",
        summary: "circle, f = 2, trigonometric partition of unity (1 ± cos)/2",
        dim: 1,
        f: "2",
        theta: "0",
        omega: None,
        m: None,
        map: None,
        partition: Some("1/2 + 1/2*cos(t1)"),
        zeros: Some(&[]),
    },
];

/// The built-in fixtures in catalogue order.
pub fn catalogue() -> &'static [FixtureSpec] {
    CATALOGUE
}

/// Look up a catalogue entry by name.
pub fn find(name: &str) -> Result<&'static FixtureSpec> {
    CATALOGUE
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownFixture(name.to_string()))
}

/// A resolved fixture: parsed, validated, ready to hand to the engines.
#[derive(Debug, Clone)]
pub struct Fixture {
    spec: FixtureSpec,
    tw: TwistData,
    omega: Option<DifferentialForm>,
    m: Option<BigRational>,
    map: Option<AffineTorusMap>,
    partition: Option<PartitionFixture>,
}

impl Fixture {
    pub fn name(&self) -> &'static str {
        self.spec.name
    }

    pub fn spec(&self) -> &FixtureSpec {
        &self.spec
    }

    pub fn twist(&self) -> &TwistData {
        &self.tw
    }

    pub fn map(&self) -> Option<&AffineTorusMap> {
        self.map.as_ref()
    }

    pub fn partition(&self) -> Option<&PartitionFixture> {
        self.partition.as_ref()
    }

    /// Number of zeros of `f`, when the fixture declares them.
    pub fn zero_count(&self) -> Option<usize> {
        self.spec.zeros.map(|z| z.len())
    }

    /// Paired-complex data, for fixtures that carry omega and m.
    pub fn lck(&self) -> Result<LckFixture> {
        match (&self.omega, &self.m) {
            (Some(omega), Some(m)) => LckFixture::new(self.tw.clone(), omega.clone(), m.clone()),
            _ => Err(Error::Config(format!(
                "fixture {} carries no coupling form",
                self.spec.name
            ))),
        }
    }

    /// Relative complex of the fixture's map, for fixtures that carry one.
    pub fn relative(&self) -> Result<RelativeComplex> {
        match &self.map {
            Some(map) => RelativeComplex::new(map.clone(), self.tw.clone()),
            None => Err(Error::Config(format!("fixture {} carries no map", self.spec.name))),
        }
    }
}

/// Build validated twist data from expression sources. `theta = "0"` (or any
/// expression for the zero function) means the untwisted operator.
pub fn twist_from_exprs(dim: usize, f_src: &str, theta_src: &str) -> Result<TwistData> {
    let f = parse_poly(f_src, dim)?;
    let theta = parse_form(theta_src, dim)?;
    if theta.is_zero() {
        Ok(TwistData::untwisted(f))
    } else {
        TwistData::new(f, theta)
    }
}

/// Parse a rational like `"3"` or `"-1/2"`.
pub fn parse_ratio(src: &str) -> Result<BigRational> {
    src.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Config(format!("bad rational {src:?}: {e}")))
}

/// Parse an affine torus map written as `"A;b"`: matrix rows separated by
/// commas, entries by whitespace, and an optional translation vector after
/// the semicolon. `"2;0"` is the doubling self-map of the circle;
/// `"1 0,0 1;1/2 1/4"` translates the 2-torus by quarter turns.
pub fn parse_affine_map(src: &str) -> Result<AffineTorusMap> {
    let (a_part, b_part) = match src.split_once(';') {
        Some((a, b)) => (a, Some(b)),
        None => (src, None),
    };
    let mut matrix = Vec::new();
    for row in a_part.split(',') {
        let entries: std::result::Result<Vec<i64>, _> =
            row.split_whitespace().map(|e| e.parse::<i64>()).collect();
        let entries =
            entries.map_err(|_| Error::Config(format!("bad matrix row {row:?} in map")))?;
        if entries.is_empty() {
            return Err(Error::Config("empty matrix row in map".into()));
        }
        matrix.push(entries);
    }
    if matrix.is_empty() {
        return Err(Error::Config("map needs at least one matrix row".into()));
    }
    let translation = match b_part {
        Some(b) => {
            let parts: Result<Vec<BigRational>> = b.split_whitespace().map(parse_ratio).collect();
            parts?
        }
        None => vec![BigRational::zero(); matrix.len()],
    };
    AffineTorusMap::new(matrix, translation)
}

fn check_real(what: &str, name: &str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::FixtureInvariant(format!("{what} of fixture {name} is not real-valued")))
    }
}

fn form_is_real(phi: &DifferentialForm) -> bool {
    phi.components().all(|(_, p)| p.is_real())
}

/// Parse and validate a catalogue entry.
pub fn resolve(name: &str) -> Result<Fixture> {
    let spec = *find(name)?;
    let tw = twist_from_exprs(spec.dim, spec.f, spec.theta)?;
    check_real("f", name, tw.f().is_real())?;
    check_real("theta", name, form_is_real(tw.theta()))?;

    if let Some(zeros) = spec.zeros {
        for q in zeros {
            let value = tw.f().eval_quarter(q)?;
            if !value.is_zero() {
                return Err(Error::FixtureInvariant(format!(
                    "fixture {name} declares a zero of f at quarter point {q:?}, but f evaluates to {value} there"
                )));
            }
        }
    }

    let omega = match spec.omega {
        Some(src) => {
            let w = parse_form(src, spec.dim)?;
            check_real("omega", name, form_is_real(&w))?;
            Some(w)
        }
        None => None,
    };
    let m = spec.m.map(parse_ratio).transpose()?;
    // Fixtures with a coupling form must satisfy the conformal-closure
    // invariant; building the paired fixture once here surfaces violations
    // at resolve time.
    if let (Some(w), Some(weight)) = (&omega, &m) {
        LckFixture::new(tw.clone(), w.clone(), weight.clone())?;
    }

    let map = spec.map.map(parse_affine_map).transpose()?;
    if let Some(map) = &map {
        if map.target_dim() != spec.dim {
            return Err(Error::FixtureInvariant(format!(
                "fixture {name} map lands in t{}, expected t{}",
                map.target_dim(),
                spec.dim
            )));
        }
    }

    let partition = match spec.partition {
        Some(src) => {
            let lambda_u = parse_poly(src, spec.dim)?;
            let lambda_v = TrigPoly::one(spec.dim).sub(&lambda_u)?;
            Some(PartitionFixture::new(lambda_u, lambda_v)?)
        }
        None => None,
    };

    Ok(Fixture { spec, tw, omega, m, map, partition })
}
