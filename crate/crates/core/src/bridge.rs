//! Pairs a configuration-sum instance `(c, w)` with a coefficient of the
//! log expansion.
//!
//! For distinct integers `c_i >= 2`, set `k = Σc - w` and `h = Σc - g`, so
//! `k - h = g - w >= 2`. Keep only the `u_s` with `s` among the `c_i` and
//! take the coefficient of the squarefree monomial `u_{c_1} .. u_{c_g}` in
//! the `j^k n^{-h}` component of the log expansion. That coefficient and
//! the configuration sum for `(c, w)` should vanish together. No
//! normalization between the two is assumed; when both are nonzero (only
//! possible outside the conjectured range) their ratio is reported per
//! power of `r`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::algebra::{MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::part1::{integer_ground, sum_collapsed, Part1Instance, Part1Result, Value};
use crate::part2::{r_variable, u_index, u_name, Part2Config, Part2Engine};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgeInstance {
    c: Vec<usize>,
    w: usize,
    k: usize,
    h: usize,
}

impl BridgeInstance {
    pub fn new(c: Vec<usize>, w: usize) -> Result<Self> {
        let inst = Self::build(c, w)?;
        let g = inst.g();
        if w + 2 > g {
            return Err(Error::InvalidInstance(format!("w = {w} outside 0..={}", g.saturating_sub(2))));
        }
        assert_eq!(inst.k - inst.h, g - w, "k - h must equal g - w");
        assert!(inst.k >= inst.h + 2);
        Ok(inst)
    }

    /// Any `w <= Σc`, including the non-conjectural `w = g - 1`.
    pub fn calibration(c: Vec<usize>, w: usize) -> Result<Self> {
        Self::build(c, w)
    }

    fn build(c: Vec<usize>, w: usize) -> Result<Self> {
        let g = c.len();
        if g < 2 {
            return Err(Error::InvalidInstance(format!("need at least two c values, got {g}")));
        }
        if let Some(&bad) = c.iter().find(|&&x| x < 2) {
            return Err(Error::InvalidInstance(format!("c value {bad} < 2")));
        }
        let distinct: BTreeSet<usize> = c.iter().copied().collect();
        if distinct.len() != g {
            return Err(Error::InvalidInstance("c values must be distinct".into()));
        }
        let total: usize = c.iter().sum();
        if w > total {
            return Err(Error::InvalidInstance(format!("w = {w} exceeds Σc = {total}")));
        }
        Ok(BridgeInstance { k: total - w, h: total - g, c, w })
    }

    pub fn c(&self) -> &[usize] {
        &self.c
    }
    pub fn g(&self) -> usize {
        self.c.len()
    }
    pub fn w(&self) -> usize {
        self.w
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn h(&self) -> usize {
        self.h
    }

    pub fn in_vanishing_regime(&self) -> bool {
        self.k >= self.h + 2
    }

    /// Smallest budget that reaches this instance, with two surplus
    /// interpolation points.
    pub fn default_config(&self) -> Part2Config {
        let h = self.h;
        let first = h as i64 + 1;
        Part2Config {
            max_h: h,
            s_max: *self.c.iter().max().expect("nonempty"),
            j_samples: (first..first + 2 * h as i64 + 3).collect(),
            u_support: Some(self.c.iter().copied().collect()),
        }
    }
}

pub fn bridge_params(c: Vec<usize>, w: usize) -> Result<BridgeInstance> {
    BridgeInstance::new(c, w)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BridgeCoefficient {
    /// Laurent polynomial in `r`.
    Computed(MultiPoly),
    NotAttempted {
        reason: String,
    },
}

impl BridgeCoefficient {
    pub fn value(&self) -> Option<&MultiPoly> {
        match self {
            BridgeCoefficient::Computed(p) => Some(p),
            BridgeCoefficient::NotAttempted { .. } => None,
        }
    }
}

fn budget_shortfall(inst: &BridgeInstance, cfg: &Part2Config) -> Option<String> {
    let h = inst.h;
    let max_c = *inst.c.iter().max().expect("nonempty");
    if cfg.max_h < h {
        return Some(format!("H = {} below h = {h}", cfg.max_h));
    }
    if cfg.s_max < max_c {
        return Some(format!("s_max = {} below max c = {max_c}", cfg.s_max));
    }
    if let Some(missing) = inst.c.iter().find(|&&s| !cfg.keeps_u(s)) {
        return Some(format!("u{missing} is zeroed in the configuration"));
    }
    let usable = cfg.j_samples.iter().filter(|&&j| j > h as i64).count();
    if usable < 2 * h + 1 {
        return Some(format!("{usable} usable j samples, a_{h} needs {}", 2 * h + 1));
    }
    None
}

pub fn bridge_coefficient(inst: &BridgeInstance, cfg: &Part2Config, jobs: usize) -> Result<BridgeCoefficient> {
    if let Some(reason) = budget_shortfall(inst, cfg) {
        return Ok(BridgeCoefficient::NotAttempted { reason });
    }
    let h = inst.h;
    let support: BTreeSet<usize> =
        inst.c.iter().copied().filter(|s| cfg.u_support.as_ref().is_none_or(|set| set.contains(s))).collect();
    let effective = Part2Config {
        max_h: h,
        s_max: cfg.s_max,
        j_samples: cfg.j_samples.iter().copied().filter(|&j| j > h as i64).collect(),
        u_support: Some(support),
    };
    let engine = Part2Engine::new(effective, jobs)?;
    let log = engine.log_expansion()?;
    let at_h = log.coeff(h)?.with_variables(&[crate::algebra::j_variable()]);
    let mut coeff = at_h.coefficient_of("j", inst.k as i32)?;
    for &s in &inst.c {
        let name = u_name(s);
        coeff = if coeff.index_of(&name).is_some() { coeff.coefficient_of(&name, 1)? } else { MultiPoly::zero() };
    }
    if let Some((exps, _)) = coeff.terms().find(|(e, _)| e.iter().any(|(name, _)| u_index(name).is_some())) {
        return Err(Error::InternalConsistency(format!("extracted coefficient still carries u factors: {exps:?}")));
    }
    Ok(BridgeCoefficient::Computed(coeff))
}

#[derive(Clone, Debug)]
pub struct BridgeReport {
    pub instance: BridgeInstance,
    pub coefficient: BridgeCoefficient,
    pub part1: Part1Result,
    /// `(r exponent, coefficient / part1 sum)` when both are nonzero.
    pub ratios: Option<Vec<(i32, Rational)>>,
}

impl BridgeReport {
    pub fn both_zero(&self) -> bool {
        self.coefficient.value().is_some_and(MultiPoly::is_zero) && self.part1.sum.is_zero()
    }

    /// Zero iff zero. `None` when the coefficient was not attempted.
    pub fn consistent(&self) -> Option<bool> {
        self.coefficient.value().map(|p| p.is_zero() == self.part1.sum.is_zero())
    }
}

impl fmt::Display for BridgeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = &self.instance;
        write!(f, "c={:?} w={} k={} h={}: coefficient=", i.c, i.w, i.k, i.h)?;
        match &self.coefficient {
            BridgeCoefficient::Computed(p) => write!(f, "{p}")?,
            BridgeCoefficient::NotAttempted { reason } => write!(f, "not attempted ({reason})")?,
        }
        write!(f, " part1={}", self.part1.sum)?;
        if let Some(ratios) = &self.ratios {
            for (e, q) in ratios {
                write!(f, " ratio[r^{e}]={q}")?;
            }
        }
        Ok(())
    }
}

pub fn bridge_check(inst: &BridgeInstance, cfg: &Part2Config, jobs: usize) -> Result<BridgeReport> {
    let coefficient = bridge_coefficient(inst, cfg, jobs)?;
    let values: Vec<i64> = inst.c.iter().map(|&x| x as i64).collect();
    let ground = integer_ground(&values)?;
    let p1 = if inst.in_vanishing_regime() {
        Part1Instance::new(ground, inst.w)?
    } else {
        Part1Instance::calibration(ground, inst.w)
    };
    let part1 = sum_collapsed(&p1, jobs)?;
    let ratios = match (&coefficient, &part1.sum) {
        (BridgeCoefficient::Computed(p), Value::Rational(s)) if !p.is_zero() && !s.is_zero() => {
            let by_r = p.extract_by_degree(&r_variable().name)?;
            Some(by_r.into_iter().map(|(e, c)| (e, c.constant_term() / s)).collect())
        }
        _ => None,
    };
    Ok(BridgeReport { instance: inst.clone(), coefficient, part1, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params() {
        let b = bridge_params(vec![2, 3], 0).unwrap();
        assert_eq!((b.k(), b.h()), (5, 3));
        let b = bridge_params(vec![2, 3, 4], 1).unwrap();
        assert_eq!((b.k(), b.h()), (8, 6));
        let b = bridge_params(vec![2, 3, 4], 0).unwrap();
        assert_eq!((b.k(), b.h(), b.k() - b.h()), (9, 6, 3));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(bridge_params(vec![2], 0).is_err());
        assert!(bridge_params(vec![1, 3], 0).is_err());
        assert!(bridge_params(vec![3, 3], 0).is_err());
        assert!(bridge_params(vec![2, 3], 1).is_err());
        assert!(BridgeInstance::calibration(vec![2, 3], 1).is_ok());
    }

    #[test]
    fn h_is_at_least_g() {
        for c in [vec![2, 3], vec![2, 5, 7], vec![3, 4]] {
            let b = bridge_params(c.clone(), 0).unwrap();
            assert!(b.h() >= b.g());
        }
    }

    #[test]
    fn small_budget_is_not_attempted() {
        let inst = bridge_params(vec![2, 3], 0).unwrap();
        let cfg = Part2Config::new(2, 6, (3..=10).collect());
        let out = bridge_coefficient(&inst, &cfg, 1).unwrap();
        assert!(matches!(out, BridgeCoefficient::NotAttempted { .. }));
        let cfg = Part2Config::new(3, 2, (4..=12).collect());
        assert!(matches!(bridge_coefficient(&inst, &cfg, 1).unwrap(), BridgeCoefficient::NotAttempted { .. }));
    }

    #[test]
    fn c23_both_vanish() {
        let inst = bridge_params(vec![2, 3], 0).unwrap();
        let report = bridge_check(&inst, &inst.default_config(), 1).unwrap();
        assert!(report.both_zero(), "{report}");
        assert_eq!(report.consistent(), Some(true));
        assert!(report.ratios.is_none());
    }

    #[test]
    fn calibration_c23_is_nonzero_on_both_sides() {
        let inst = BridgeInstance::calibration(vec![2, 3], 1).unwrap();
        assert!(!inst.in_vanishing_regime());
        let report = bridge_check(&inst, &inst.default_config(), 1).unwrap();
        assert_eq!(report.consistent(), Some(true), "{report}");
        let ratios = report.ratios.expect("both sides nonzero");
        assert_eq!(ratios.len(), 1);
        assert_eq!(ratios[0].0, -5);
    }
}
