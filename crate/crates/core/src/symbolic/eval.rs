//! Exact evaluation at rational points, the brute-force oracle for identities.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Atom, Expr, Q};
use crate::error::{Error, Result};

/// Bound for sampled numerators and denominators.
pub const SAMPLE_BOUND: i64 = 10_000;

/// Evaluates with every top-level atom (composite ones included) taken from `values`.
pub fn eval(e: &Expr, values: &HashMap<Atom, Q>) -> Result<Q> {
    let missing = || Error::InvalidExpression("assignment does not cover every atom".into());
    let n = e.num().eval(values).ok_or_else(missing)?;
    let d = e.den().eval(values).ok_or_else(missing)?;
    if d.is_zero() {
        return Err(Error::DivisionByZero(None));
    }
    Ok(n / d)
}

/// Seeded sampler of rational points.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Q {
        let n: i64 = self.rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        let mut d: i64 = 0;
        while d == 0 {
            d = self.rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
        }
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    pub fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn assignment<'a>(&mut self, atoms: impl IntoIterator<Item = &'a Atom>) -> HashMap<Atom, Q> {
        atoms
            .into_iter()
            .map(|a| (a.clone(), self.rational()))
            .collect()
    }
}

/// Evaluates `e` at `assignment`, filling unassigned atoms at random; on a pole the
/// whole point is resampled up to `retries` times.
pub fn random_eval(
    e: &Expr,
    assignment: &HashMap<Atom, Q>,
    retries: usize,
    sampler: &mut Sampler,
) -> Result<Q> {
    let atoms = e.atoms();
    let mut point: HashMap<Atom, Q> = atoms
        .iter()
        .map(|a| {
            let v = assignment.get(a).cloned().unwrap_or_else(|| sampler.rational());
            (a.clone(), v)
        })
        .collect();
    for attempt in 0..=retries {
        match eval(e, &point) {
            Ok(v) => return Ok(v),
            Err(Error::DivisionByZero(_)) if attempt < retries => {
                point = sampler.assignment(&atoms);
            }
            Err(Error::DivisionByZero(_)) => break,
            Err(other) => return Err(other),
        }
    }
    Err(Error::PoleAtAllSamples {
        attempts: retries + 1,
    })
}

/// Compares `a` and `b` at `points` shared random points, treating every top-level
/// atom of either side as an independent unknown. Poles are skipped and resampled.
pub fn agree_at_random_points(a: &Expr, b: &Expr, points: usize, seed: u64) -> Result<bool> {
    let mut atoms: BTreeSet<Atom> = a.atoms();
    atoms.extend(b.atoms());
    let mut sampler = Sampler::new(seed);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < points {
        attempts += 1;
        if attempts > points * 20 {
            return Err(Error::PoleAtAllSamples { attempts });
        }
        let point = sampler.assignment(&atoms);
        let (va, vb) = match (eval(a, &point), eval(b, &point)) {
            (Ok(va), Ok(vb)) => (va, vb),
            (Err(Error::DivisionByZero(_)), _) | (_, Err(Error::DivisionByZero(_))) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        if va != vb {
            return Ok(false);
        }
        checked += 1;
    }
    Ok(true)
}

/// Probabilistic confirmation that `e` vanishes.
pub fn confirm_zero(e: &Expr, points: usize, seed: u64) -> Result<bool> {
    agree_at_random_points(e, &Expr::zero(), points, seed)
}
