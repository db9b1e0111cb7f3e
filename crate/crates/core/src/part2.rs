//! Expansion coefficients of the monomer-dimer generating function and the
//! vanishing of their logarithm's high-`j` components.
//!
//! `M_j(n, r)` is the `x^j` coefficient of
//! `exp(n r x - Σ_{s>=2} (n u_s / s) (-x)^s)`, with `u_s` and `r` kept as
//! indeterminates. Writing `M_j = (n r)^j / j! · Σ_h a_h(r, j) n^{-h}`, each
//! `a_h` turns out to be a polynomial in `j`, so `ln(1 + Σ_h a_h n^{-h})` can
//! be expanded in powers of `j` and `1/n`. The claim checked here is that
//! the `j^k n^{-h}` component vanishes whenever `k >= h + 2`.
//!
//! `a_h` is computed two ways that must agree: a closed form summing over
//! multisets of `u` indices (with a falling factorial in `j`), and
//! interpolation in `j` through values extracted from `M_j` at integer `j`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::algebra::rational::{factorial, factorial_rational};
use crate::algebra::{
    falling_factorial, int, interpolate_in_j, j_variable, ratio, MultiPoly, Rational, Series, Variable,
};
use crate::error::{Error, Result};

pub fn n_variable() -> Variable {
    Variable::ordinary("n")
}

pub fn r_variable() -> Variable {
    Variable::laurent("r")
}

pub fn u_name(s: usize) -> String {
    format!("u{s}")
}

pub fn u_variable(s: usize) -> Variable {
    Variable::ordinary(u_name(s))
}

/// Parses `u<s>` back to `s`.
pub fn u_index(name: &str) -> Option<usize> {
    name.strip_prefix('u')?.parse().ok()
}

/// Name of the expansion variable for the `1/n` series.
pub const INVERSE_N: &str = "1/n";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part2Config {
    /// Largest `h` checked; truncation depth in `1/n`.
    pub max_h: usize,
    /// Largest `s` with `u_s` kept.
    pub s_max: usize,
    /// Integer `j` values feeding the interpolation oracle.
    pub j_samples: Vec<i64>,
    /// When set, only these `u_s` survive; the rest are zero.
    pub u_support: Option<BTreeSet<usize>>,
}

impl Default for Part2Config {
    fn default() -> Self {
        Part2Config { max_h: 4, s_max: 6, j_samples: (5..=16).collect(), u_support: None }
    }
}

impl Part2Config {
    pub fn new(max_h: usize, s_max: usize, j_samples: Vec<i64>) -> Self {
        Part2Config { max_h, s_max, j_samples, u_support: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s_max < 2 {
            return Err(Error::InvalidParameters(format!("s_max = {} (need >= 2)", self.s_max)));
        }
        if let Some(&j) = self.j_samples.iter().find(|&&j| j < self.max_h as i64 + 1) {
            return Err(Error::InvalidParameters(format!("j sample {j} below H + 1 = {}", self.max_h + 1)));
        }
        let distinct: BTreeSet<i64> = self.j_samples.iter().copied().collect();
        if distinct.len() != self.j_samples.len() {
            return Err(Error::InvalidParameters("repeated j sample".into()));
        }
        let needed = 2 * self.max_h + 1;
        if self.j_samples.len() < needed {
            return Err(Error::InvalidParameters(format!(
                "{} j samples; interpolating a_{} needs at least {needed}",
                self.j_samples.len(),
                self.max_h
            )));
        }
        Ok(())
    }

    pub fn keeps_u(&self, s: usize) -> bool {
        (2..=self.s_max).contains(&s) && self.u_support.as_ref().is_none_or(|set| set.contains(&s))
    }

    pub fn kept_u(&self) -> Vec<usize> {
        (2..=self.s_max).filter(|&s| self.keeps_u(s)).collect()
    }
}

/// Coefficient of `n u_s x^s` in the exponent: `-(-1)^s / s`.
fn u_weight_in_exponent(s: usize) -> Rational {
    let sign = if s % 2 == 0 { -1 } else { 1 };
    ratio(sign, s as i64)
}

/// The exponent `n r x - Σ_s (n u_s / s)(-x)^s` as a series in `x` of order `order`.
pub fn exponent_series(order: usize, cfg: &Part2Config) -> Series {
    let n = MultiPoly::var(&n_variable());
    let mut coeffs = vec![MultiPoly::zero(); order + 1];
    if order >= 1 {
        coeffs[1] = &n * &MultiPoly::var(&r_variable());
    }
    for s in cfg.kept_u() {
        if s <= order {
            coeffs[s] = (&n * &MultiPoly::var(&u_variable(s))).scale(&u_weight_in_exponent(s));
        }
    }
    Series::new("x", order, coeffs)
}

pub fn compute_mj(j: usize, cfg: &Part2Config) -> Result<MultiPoly> {
    if j == 0 {
        return Err(Error::InvalidParameters("M_j needs j >= 1".into()));
    }
    let e = exponent_series(j, cfg).exp()?;
    Ok(e.coeff(j)?.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ACoefficient {
    pub h: usize,
    /// Polynomial in `j`, Laurent in `r`, and in the kept `u_s`.
    pub value: MultiPoly,
}

impl ACoefficient {
    /// Every term's `u`-weight `Σ (s - 1) e_s` equals `h`.
    pub fn check_u_weight(&self) -> Result<()> {
        for (exps, _) in self.value.terms() {
            let weight: i64 =
                exps.iter().filter_map(|(name, e)| u_index(name).map(|s| (s as i64 - 1) * *e as i64)).sum();
            if weight != self.h as i64 {
                return Err(Error::InternalConsistency(format!("a_{} has a term of u-weight {weight}", self.h)));
            }
        }
        Ok(())
    }
}

/// Reads `a_0 .. a_{j-1}` off `M_j`: `a_h = [n^{j-h}] (j! M_j) / r^j`.
pub fn a_from_mj(j: usize, mj: &MultiPoly) -> Result<Vec<ACoefficient>> {
    let scaled = mj.scale(&factorial_rational(j as u64));
    let n = n_variable().name;
    if scaled.index_of(&n).is_none() {
        return Err(Error::Structural(format!("M_{j} does not involve n")));
    }
    let parts = scaled.extract_by_degree(&n)?;
    if let Some((d, _)) = parts.iter().find(|(d, _)| *d < 1 || *d > j as i32) {
        return Err(Error::Structural(format!("M_{j} has an n^{d} term outside n^1..n^{j}")));
    }
    let by_degree: BTreeMap<i32, MultiPoly> = parts.into_iter().collect();
    let r_inv = MultiPoly::var_pow(&r_variable(), -(j as i32))?;
    Ok((0..j)
        .map(|h| {
            let value = by_degree.get(&((j - h) as i32)).map(|p| p * &r_inv).unwrap_or_default();
            ACoefficient { h, value }
        })
        .collect())
}

/// `M_j` from `a_0 .. a_{j-1}`: `(n r)^j / j! Σ_h a_h n^{-h}`.
pub fn reassemble_mj(j: usize, a: &[MultiPoly]) -> Result<MultiPoly> {
    let n = n_variable();
    let prefactor = MultiPoly::var_pow(&r_variable(), j as i32)?
        .scale(&Rational::new(BigInt::from(1), BigInt::from(factorial(j as u64))));
    let mut total = MultiPoly::zero();
    for (h, ah) in a.iter().enumerate().take(j) {
        total += &(ah * &MultiPoly::var_pow(&n, (j - h) as i32)?);
    }
    Ok(&total * &prefactor)
}

/// Multisets `{s: multiplicity}` over `allowed` with `Σ (s-1) mult = h`.
fn weighted_multisets(h: usize, allowed: &[usize]) -> Vec<BTreeMap<usize, u32>> {
    fn go(rest: usize, allowed: &[usize], current: &mut BTreeMap<usize, u32>, out: &mut Vec<BTreeMap<usize, u32>>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        let Some((&s, tail)) = allowed.split_first() else { return };
        let step = s - 1;
        let mut k = 0u32;
        while (k as usize) * step <= rest {
            if k > 0 {
                current.insert(s, k);
            }
            go(rest - k as usize * step, tail, current, out);
            k += 1;
        }
        current.remove(&s);
    }
    let mut out = Vec::new();
    go(h, allowed, &mut BTreeMap::new(), &mut out);
    out
}

/// `a_h(r, j)` as a polynomial in `j`:
/// `Σ_{multisets} Π_s (b_s u_s)^{m_s} / m_s! · j^{\underline{M}} / r^M`
/// with `b_s = -(-1)^s / s` and `M = Σ s m_s`.
pub fn a_closed_form(h: usize, cfg: &Part2Config) -> MultiPoly {
    let j = j_variable();
    let allowed = cfg.kept_u();
    let mut total = MultiPoly::zero().with_variables(std::slice::from_ref(&j));
    for multiset in weighted_multisets(h, &allowed) {
        let mut coeff = int(1);
        let mut factors: Vec<(Variable, i32)> = Vec::new();
        let mut m = 0usize;
        for (&s, &mult) in &multiset {
            coeff *= num_traits::pow(u_weight_in_exponent(s), mult as usize);
            coeff /= factorial_rational(mult as u64);
            factors.push((u_variable(s), mult as i32));
            m += s * mult as usize;
        }
        factors.push((r_variable(), -(m as i32)));
        let mono = MultiPoly::monomial(coeff, &factors).expect("r is Laurent");
        total += &(&mono * &falling_factorial(&j, m));
    }
    total
}

/// Precomputed `M_j` and `a_h(r, j)` at the sample points, plus the checks
/// that tie the two routes together.
#[derive(Clone, Debug)]
pub struct Part2Engine {
    cfg: Part2Config,
    samples: BTreeMap<i64, (MultiPoly, Vec<ACoefficient>)>,
}

impl Part2Engine {
    pub fn new(cfg: Part2Config, jobs: usize) -> Result<Self> {
        cfg.validate()?;
        let work = |&j: &i64| -> Result<(i64, (MultiPoly, Vec<ACoefficient>))> {
            let mj = compute_mj(j as usize, &cfg)?;
            let a = a_from_mj(j as usize, &mj)?;
            Ok((j, (mj, a)))
        };
        let computed: Vec<Result<_>> = if jobs <= 1 {
            cfg.j_samples.iter().map(work).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?;
            pool.install(|| cfg.j_samples.par_iter().map(work).collect())
        };
        let samples = computed.into_iter().collect::<Result<_>>()?;
        Ok(Part2Engine { cfg, samples })
    }

    pub fn config(&self) -> &Part2Config {
        &self.cfg
    }

    pub fn mj(&self, j: i64) -> Option<&MultiPoly> {
        self.samples.get(&j).map(|(m, _)| m)
    }

    pub fn sampled_a(&self, j: i64) -> Option<&[ACoefficient]> {
        self.samples.get(&j).map(|(_, a)| a.as_slice())
    }

    /// The interpolation route alone: `a_h` through the sampled values.
    pub fn a_interpolated(&self, h: usize) -> Result<MultiPoly> {
        let points: Vec<(i64, MultiPoly)> = self.samples.iter().map(|(&j, (_, a))| (j, a[h].value.clone())).collect();
        interpolate_in_j(&points, 2 * h)
    }

    /// The closed form, checked against the interpolation route and the
    /// `u`-weight structure. Disagreement is an error.
    pub fn a_symbolic_in_j(&self, h: usize) -> Result<ACoefficient> {
        if h > self.cfg.max_h {
            return Err(Error::PrecisionExceeded { requested: h, order: self.cfg.max_h });
        }
        let closed = a_closed_form(h, &self.cfg);
        let oracle = self.a_interpolated(h)?;
        if closed != oracle {
            return Err(Error::InternalConsistency(format!("a_{h}: closed form and interpolation disagree")));
        }
        let a = ACoefficient { h, value: closed };
        a.check_u_weight()?;
        Ok(a)
    }

    /// `1 + Σ_{h=1..H} a_h n^{-h}` as a series in `1/n`.
    pub fn a_series(&self) -> Result<Series> {
        let mut coeffs = vec![MultiPoly::one()];
        for h in 1..=self.cfg.max_h {
            coeffs.push(self.a_symbolic_in_j(h)?.value);
        }
        Ok(Series::new(INVERSE_N, self.cfg.max_h, coeffs))
    }

    /// `ln(1 + Σ a_h n^{-h})` to order `n^{-H}`. Terms `a_s n^{-s}` with
    /// `s > H` cannot reach `n^{-H}`, so truncating the inner sum at `H`
    /// instead of `j - 1` is exact at every retained order.
    pub fn log_expansion(&self) -> Result<Series> {
        self.a_series()?.log()
    }

    pub fn check_vanishing(&self) -> Result<VanishingReport> {
        let log = self.log_expansion()?;
        check_log_series(&log)
    }
}

pub fn log_expansion(cfg: &Part2Config, jobs: usize) -> Result<Series> {
    Part2Engine::new(cfg.clone(), jobs)?.log_expansion()
}

pub fn check_vanishing(cfg: &Part2Config, jobs: usize) -> Result<VanishingReport> {
    Part2Engine::new(cfg.clone(), jobs)?.check_vanishing()
}

#[derive(Clone, Debug)]
pub struct VanishingOrder {
    pub h: usize,
    pub coefficient: MultiPoly,
    /// `(k, [j^k] coefficient)`, highest `k` first, nonzero only.
    pub components: Vec<(i32, MultiPoly)>,
    /// Components with `k >= h + 2`; the claim is that this is empty.
    pub violations: Vec<(i32, MultiPoly)>,
}

impl VanishingOrder {
    pub fn j_degree(&self) -> Option<i32> {
        self.components.first().map(|(k, _)| *k)
    }

    pub fn component(&self, k: i32) -> MultiPoly {
        self.components.iter().find(|(d, _)| *d == k).map(|(_, p)| p.clone()).unwrap_or_default()
    }
}

#[derive(Clone, Debug)]
pub struct VanishingReport {
    pub orders: Vec<VanishingOrder>,
}

impl VanishingReport {
    pub fn all_vanish(&self) -> bool {
        self.orders.iter().all(|o| o.violations.is_empty())
    }
}

impl fmt::Display for VanishingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.orders {
            let deg = o.j_degree().map_or("-".to_string(), |d| d.to_string());
            writeln!(
                f,
                "h={} j-degree={} (bound {}) terms={} violations={}",
                o.h,
                deg,
                o.h + 1,
                o.coefficient.num_terms(),
                o.violations.len()
            )?;
            for (k, p) in &o.violations {
                writeln!(f, "  k={k}: {p}")?;
            }
        }
        Ok(())
    }
}

/// Splits each `n^{-h}` coefficient (`h >= 1`) of a log series by powers
/// of `j` and collects the `k >= h + 2` components.
pub fn check_log_series(log: &Series) -> Result<VanishingReport> {
    let j = j_variable();
    let mut orders = Vec::new();
    for h in 1..=log.order() {
        let coefficient = log.coeff(h)?.clone();
        let components = coefficient.with_variables(std::slice::from_ref(&j)).extract_by_degree(&j.name)?;
        let violations = components.iter().filter(|(k, _)| *k >= h as i32 + 2).cloned().collect();
        orders.push(VanishingOrder { h, coefficient, components, violations });
    }
    Ok(VanishingReport { orders })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n() -> MultiPoly {
        MultiPoly::var(&n_variable())
    }
    fn r() -> MultiPoly {
        MultiPoly::var(&r_variable())
    }
    fn u(s: usize) -> MultiPoly {
        MultiPoly::var(&u_variable(s))
    }
    fn rpow(e: i32) -> MultiPoly {
        MultiPoly::var_pow(&r_variable(), e).unwrap()
    }
    fn jv() -> MultiPoly {
        MultiPoly::var(&j_variable())
    }

    fn small() -> Part2Config {
        Part2Config::new(3, 6, (4..=12).collect())
    }

    #[test]
    fn low_order_mj() {
        let cfg = small();
        assert_eq!(compute_mj(1, &cfg).unwrap(), &n() * &r());
        let m2 = &(&n().pow(2) * &r().pow(2)).scale(&ratio(1, 2)) - &(&n() * &u(2)).scale(&ratio(1, 2));
        assert_eq!(compute_mj(2, &cfg).unwrap(), m2);
        let m3 = (&n().pow(3) * &r().pow(3)).scale(&ratio(1, 6)) - (&(&n().pow(2) * &r()) * &u(2)).scale(&ratio(1, 2))
            + (&n() * &u(3)).scale(&ratio(1, 3));
        assert_eq!(compute_mj(3, &cfg).unwrap(), m3);
    }

    #[test]
    fn a_from_low_order_mj() {
        let cfg = small();
        let a2 = a_from_mj(2, &compute_mj(2, &cfg).unwrap()).unwrap();
        assert_eq!(a2.len(), 2);
        assert_eq!(a2[0].value, MultiPoly::one());
        assert_eq!(a2[1].value, -&(&u(2) * &rpow(-2)));

        let a3 = a_from_mj(3, &compute_mj(3, &cfg).unwrap()).unwrap();
        assert_eq!(a3[0].value, MultiPoly::one());
        assert_eq!(a3[1].value, (&u(2) * &rpow(-2)).scale(&int(-3)));
        assert_eq!(a3[2].value, (&u(3) * &rpow(-3)).scale(&int(2)));
        for j in 1..=8 {
            let a = a_from_mj(j, &compute_mj(j, &cfg).unwrap()).unwrap();
            assert_eq!(a[0].value, MultiPoly::one(), "j={j}");
        }
    }

    #[test]
    fn a_from_mj_rejects_bad_structure() {
        assert!(matches!(a_from_mj(2, &MultiPoly::one()), Err(Error::Structural(_))));
        let bad = n().pow(3);
        assert!(matches!(a_from_mj(2, &bad), Err(Error::Structural(_))));
        let with_constant = &n() + &MultiPoly::one();
        assert!(matches!(a_from_mj(2, &with_constant), Err(Error::Structural(_))));
    }

    #[test]
    fn closed_forms_low_h() {
        let cfg = small();
        assert_eq!(a_closed_form(0, &cfg), MultiPoly::one());
        let jj1 = &jv() * &(&jv() - &MultiPoly::one());
        let a1 = (&jj1 * &(&u(2) * &rpow(-2))).scale(&ratio(-1, 2));
        assert_eq!(a_closed_form(1, &cfg), a1);

        let ff4 = falling_factorial(&j_variable(), 4);
        let ff3 = falling_factorial(&j_variable(), 3);
        let a2 = &(&ff4 * &(&u(2).pow(2) * &rpow(-4))).scale(&ratio(1, 8))
            + &(&ff3 * &(&u(3) * &rpow(-3))).scale(&ratio(1, 3));
        assert_eq!(a_closed_form(2, &cfg), a2);
    }

    #[test]
    fn multisets_by_weight() {
        let m = weighted_multisets(2, &[2, 3, 4]);
        assert_eq!(m.len(), 2);
        let m = weighted_multisets(3, &[2, 3, 4]);
        // {2,2,2}, {2,3}, {4}
        assert_eq!(m.len(), 3);
        assert_eq!(weighted_multisets(0, &[2]).len(), 1);
    }

    #[test]
    fn config_validation() {
        assert!(Part2Config::new(3, 1, (4..=12).collect()).validate().is_err());
        assert!(Part2Config::new(3, 6, (3..=12).collect()).validate().is_err());
        assert!(Part2Config::new(3, 6, (4..=8).collect()).validate().is_err());
        assert!(Part2Config::new(3, 6, vec![4, 4, 5, 6, 7, 8, 9, 10]).validate().is_err());
        assert!(Part2Config::default().validate().is_ok());
    }

    #[test]
    fn log_coefficients_low_order() {
        let engine = Part2Engine::new(small(), 1).unwrap();
        let log = engine.log_expansion().unwrap();
        assert!(log.coeff(0).unwrap().is_zero());
        assert_eq!(log.coeff(1).unwrap(), &a_closed_form(1, &small()));

        // -j(j-1)(2j-3) u2^2 / (4 r^4) + j(j-1)(j-2) u3 / (3 r^3)
        let jj1 = &jv() * &(&jv() - &MultiPoly::one());
        let two_j_minus_3 = &jv().scale(&int(2)) - &MultiPoly::constant(int(3));
        let expected = &(&(&jj1 * &two_j_minus_3) * &(&u(2).pow(2) * &rpow(-4))).scale(&ratio(-1, 4))
            + &(&falling_factorial(&j_variable(), 3) * &(&u(3) * &rpow(-3))).scale(&ratio(1, 3));
        assert_eq!(log.coeff(2).unwrap(), &expected);
    }

    #[test]
    fn vanishing_small_budget() {
        let report = Part2Engine::new(small(), 2).unwrap().check_vanishing().unwrap();
        assert!(report.all_vanish(), "{report}");
        assert_eq!(report.orders[0].j_degree(), Some(2));
        assert_eq!(report.orders[1].j_degree(), Some(3));
    }

    #[test]
    fn perturbed_series_is_caught() {
        // Adding a j^4/n^2 term to a_2 must surface as a violation.
        let engine = Part2Engine::new(small(), 1).unwrap();
        let mut coeffs = engine.a_series().unwrap().coeffs().to_vec();
        coeffs[2] += &(&jv().pow(4) * &u(2).pow(2));
        let log = Series::new(INVERSE_N, 3, coeffs).log().unwrap();
        let report = check_log_series(&log).unwrap();
        assert!(!report.all_vanish());
        assert_eq!(report.orders[1].violations[0].0, 4);
    }
}
