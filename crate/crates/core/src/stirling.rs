//! Unsigned Stirling numbers of the first kind and the polynomials
//! `P_w(x)` interpolating the diagonal `[n, n-w]`.
//!
//! `[n, n-w]` is a polynomial of degree `2w` in `n`. `P_w` is recovered from
//! the `2w + 1` triangle entries at `n = w ..= 3w`, then cross-checked against
//! the shift identity `P_w(x+1) - P_w(x) = x P_{w-1}(x)` before use.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::algebra::rational::{factorial, parse_rational, to_ratio_string};
use crate::algebra::{int, interpolate, MultiPoly, Rational, Variable};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTriangle {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTriangle {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigUint::one()]);
        for n in 0..n_max {
            let prev = &rows[n];
            let next: Vec<BigUint> = (0..=n + 1)
                .map(|k| {
                    let left = if k >= 1 { prev[k - 1].clone() } else { BigUint::zero() };
                    let right = prev.get(k).map(|x| x * n).unwrap_or_default();
                    left + right
                })
                .collect();
            rows.push(next);
        }
        StirlingTriangle { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }

    /// `[n, k]`, zero for `k > n`. Panics if `n` is beyond the table.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.rows[n].get(k).cloned().unwrap_or_default()
    }
}

pub fn triangle(n_max: usize) -> StirlingTriangle {
    StirlingTriangle::new(n_max)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingPoly {
    w: usize,
    /// `coeffs[i]` multiplies `x^i`; length `2w + 1`.
    coeffs: Vec<Rational>,
}

impl StirlingPoly {
    pub fn w(&self) -> usize {
        self.w
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_symbolic(&self, t: &MultiPoly) -> MultiPoly {
        self.coeffs.iter().rev().fold(MultiPoly::zero(), |acc, c| &(&acc * t) + &MultiPoly::constant(c.clone()))
    }

    /// Checks the polynomial against the triangle at its `2w + 1` defining
    /// nodes and the expected degree/leading-sign shape.
    fn validate(&self, tri: &StirlingTriangle) -> Result<()> {
        let w = self.w;
        if self.coeffs.len() != 2 * w + 1 {
            return Err(Error::InternalConsistency(format!(
                "P_{w} has {} coefficients, expected {}",
                self.coeffs.len(),
                2 * w + 1
            )));
        }
        let lead = &self.coeffs[2 * w];
        if lead <= &Rational::zero() {
            return Err(Error::InternalConsistency(format!("P_{w} leading coefficient {lead} not positive")));
        }
        for n in w..=3 * w {
            let expected = Rational::from_integer(BigInt::from(tri.get(n, n - w)));
            if self.eval(&int(n as i64)) != expected {
                return Err(Error::InternalConsistency(format!("P_{w}({n}) disagrees with [{n},{}]", n - w)));
            }
        }
        Ok(())
    }
}

/// Coefficients of `p(x+1) - p(x)`.
fn forward_difference(p: &[Rational]) -> Vec<Rational> {
    // p(x+1) = Σ_i c_i Σ_k C(i,k) x^k
    let mut out = vec![Rational::zero(); p.len().saturating_sub(1).max(1)];
    for (i, c) in p.iter().enumerate() {
        let mut binom = BigInt::one();
        for k in 0..i {
            // C(i, k) for k < i
            out[k] += c * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(i - k) / BigInt::from(k + 1);
        }
    }
    out
}

fn shift_identity_holds(pw: &StirlingPoly, prev: &StirlingPoly) -> bool {
    let lhs = forward_difference(&pw.coeffs);
    let mut rhs = vec![Rational::zero()];
    rhs.extend(prev.coeffs.iter().cloned());
    let trim = |v: &[Rational]| -> Vec<Rational> {
        let end = v.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
        v[..end].to_vec()
    };
    trim(&lhs) == trim(&rhs)
}

fn interpolate_diagonal(w: usize, tri: &StirlingTriangle) -> Result<StirlingPoly> {
    let x = Variable::ordinary("x");
    let samples: Vec<(i64, MultiPoly)> = (w..=3 * w)
        .map(|n| (n as i64, MultiPoly::constant(Rational::from_integer(BigInt::from(tri.get(n, n - w))))))
        .collect();
    let p = interpolate(&x, &samples, 2 * w)?;
    let coeffs =
        (0..=2 * w).map(|k| p.coefficient_of("x", k as i32).map(|c| c.constant_term())).collect::<Result<Vec<_>>>()?;
    Ok(StirlingPoly { w, coeffs })
}

/// Memoized `P_0 ..= P_{w_max}`, every entry cross-validated.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    polys: Vec<Arc<StirlingPoly>>,
}

impl StirlingTable {
    pub fn up_to(w_max: usize) -> Result<Self> {
        let tri = triangle(3 * w_max);
        let mut polys: Vec<Arc<StirlingPoly>> = Vec::with_capacity(w_max + 1);
        for w in 0..=w_max {
            let p = interpolate_diagonal(w, &tri)?;
            Self::check(&p, polys.last().map(|a| a.as_ref()), &tri)?;
            polys.push(Arc::new(p));
        }
        Ok(StirlingTable { polys })
    }

    fn check(p: &StirlingPoly, prev: Option<&StirlingPoly>, tri: &StirlingTriangle) -> Result<()> {
        p.validate(tri)?;
        if let Some(prev) = prev {
            if !shift_identity_holds(p, prev) {
                return Err(Error::InternalConsistency(format!(
                    "P_{w}(x+1) - P_{w}(x) != x P_{}(x)",
                    p.w - 1,
                    w = p.w
                )));
            }
        }
        Ok(())
    }

    pub fn w_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn get(&self, w: usize) -> &StirlingPoly {
        &self.polys[w]
    }

    pub fn eval(&self, w: usize, t: &Rational) -> Rational {
        self.polys[w].eval(t)
    }

    pub fn eval_symbolic(&self, w: usize, t: &MultiPoly) -> MultiPoly {
        self.polys[w].eval_symbolic(t)
    }

    /// One line per `w`, coefficients of `x^0 ..` as space-separated `num/den`.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path)?;
        for p in &self.polys {
            let line: Vec<String> = p.coeffs.iter().map(to_ratio_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }

    /// Loads a cache file, keeping only lines that pass the same validation
    /// as freshly computed polynomials; the rest are recomputed. Returns the
    /// table plus one warning per rejected line.
    pub fn load_cache(path: &Path, w_max: usize) -> Result<(Self, Vec<String>)> {
        let text = fs::read_to_string(path)?;
        let tri = triangle(3 * w_max);
        let mut warnings = Vec::new();
        let mut polys: Vec<Arc<StirlingPoly>> = Vec::with_capacity(w_max + 1);
        let mut lines = text.lines();
        for w in 0..=w_max {
            let cached = lines.next().and_then(|line| {
                let coeffs: Result<Vec<Rational>> = line.split_whitespace().map(parse_rational).collect();
                match coeffs {
                    Ok(coeffs) => Some(StirlingPoly { w, coeffs }),
                    Err(e) => {
                        warnings.push(format!("cache line for w={w} unreadable: {e}"));
                        None
                    }
                }
            });
            let prev = polys.last().map(|a| a.as_ref());
            let p = match cached {
                Some(p) if Self::check(&p, prev, &tri).is_ok() => p,
                Some(_) => {
                    warnings.push(format!("cache line for w={w} failed validation; recomputed"));
                    interpolate_diagonal(w, &tri)?
                }
                None => interpolate_diagonal(w, &tri)?,
            };
            Self::check(&p, prev, &tri)?;
            polys.push(Arc::new(p));
        }
        Ok((StirlingTable { polys }, warnings))
    }
}

static SHARED: OnceLock<Mutex<StirlingTable>> = OnceLock::new();

/// `P_w`, from a process-wide memo that grows on demand.
pub fn stirling_poly(w: usize) -> Result<StirlingPoly> {
    let lock = SHARED.get_or_init(|| Mutex::new(StirlingTable::up_to(0).expect("P_0")));
    let mut table = lock.lock().expect("stirling memo poisoned");
    if table.w_max() < w {
        *table = StirlingTable::up_to(w)?;
    }
    Ok(table.get(w).clone())
}

pub fn eval_p(w: usize, t: &Rational) -> Result<Rational> {
    Ok(stirling_poly(w)?.eval(t))
}

pub fn eval_p_symbolic(w: usize, t: &MultiPoly) -> Result<MultiPoly> {
    Ok(stirling_poly(w)?.eval_symbolic(t))
}

pub fn row_sum_is_factorial(tri: &StirlingTriangle, n: usize) -> bool {
    tri.row(n).iter().sum::<BigUint>() == factorial(n as u64)
}
