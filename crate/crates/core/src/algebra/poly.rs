//! Sparse multivariate (Laurent) polynomials with exact rational coefficients.
//!
//! A [`MultiPoly`] carries its own variable registry. Binary operations on
//! polynomials over different registries first re-express both operands over
//! the union registry, so callers never need to pre-declare variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub name: String,
    /// Laurent variables may carry negative exponents.
    pub laurent: bool,
}

impl Variable {
    pub fn ordinary(name: impl Into<String>) -> Self {
        Variable { name: name.into(), laurent: false }
    }

    pub fn laurent(name: impl Into<String>) -> Self {
        Variable { name: name.into(), laurent: true }
    }
}

type Exponents = Vec<i32>;

#[derive(Clone, Default)]
pub struct MultiPoly {
    vars: Arc<Vec<Variable>>,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly { vars: Arc::default(), terms }
    }

    pub fn var(v: &Variable) -> Self {
        Self::monomial(Rational::one(), &[(v.clone(), 1)]).expect("positive exponent")
    }

    /// `v^exp`; negative `exp` only for Laurent variables.
    pub fn var_pow(v: &Variable, exp: i32) -> Result<Self> {
        Self::monomial(Rational::one(), &[(v.clone(), exp)])
    }

    /// `coeff * Π v^e`. Repeated variables have their exponents added.
    pub fn monomial(coeff: Rational, factors: &[(Variable, i32)]) -> Result<Self> {
        let mut vars: Vec<Variable> = Vec::new();
        let mut exps: Vec<i32> = Vec::new();
        for (v, e) in factors {
            match vars.iter().position(|x| x.name == v.name) {
                Some(i) => {
                    vars[i].laurent |= v.laurent;
                    exps[i] += e;
                }
                None => {
                    vars.push(v.clone());
                    exps.push(*e);
                }
            }
        }
        for (v, e) in vars.iter().zip(&exps) {
            if *e < 0 && !v.laurent {
                return Err(Error::NegativeExponent(v.name.clone()));
            }
        }
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        Ok(MultiPoly { vars: Arc::new(vars), terms })
    }

    /// Registers `vars` (with zero exponents) without changing the value.
    pub fn with_variables(&self, vars: &[Variable]) -> MultiPoly {
        let extra = Arc::new(vars.to_vec());
        let union = Self::union_registry(&self.vars, &extra);
        self.with_registry(&union)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Iterates `(exponents by variable name, coefficient)` for every term.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<(&str, i32)>, &Rational)> + '_ {
        self.terms.iter().map(move |(e, c)| {
            let named = self.vars.iter().zip(e).filter(|(_, &x)| x != 0).map(|(v, &x)| (v.name.as_str(), x)).collect();
            (named, c)
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Smallest and largest exponent of `name` over all terms, `None` for zero.
    pub fn degree_range(&self, name: &str) -> Result<Option<(i32, i32)>> {
        if self.is_zero() {
            return Ok(None);
        }
        let Some(i) = self.index_of(name) else {
            return Ok(Some((0, 0)));
        };
        let lo = self.terms.keys().map(|e| e[i]).min().unwrap_or(0);
        let hi = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        Ok(Some((lo, hi)))
    }

    /// Splits `self` by the power of `name`, highest power first. The
    /// returned pieces no longer mention `name`; summing `piece * name^deg`
    /// over the list gives back `self`.
    pub fn extract_by_degree(&self, name: &str) -> Result<Vec<(i32, MultiPoly)>> {
        let i = self.index_of(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut groups: BTreeMap<i32, BTreeMap<Exponents, Rational>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[i] = 0;
            groups.entry(e[i]).or_default().insert(rest, c.clone());
        }
        Ok(groups
            .into_iter()
            .rev()
            .map(|(d, terms)| (d, MultiPoly { vars: self.vars.clone(), terms }.pruned_registry()))
            .collect())
    }

    /// The coefficient of `name^degree`, as a polynomial in the other variables.
    pub fn coefficient_of(&self, name: &str, degree: i32) -> Result<MultiPoly> {
        Ok(self.extract_by_degree(name)?.into_iter().find(|(d, _)| *d == degree).map(|(_, p)| p).unwrap_or_default())
    }

    /// Replaces `name` by the scalar `value`.
    pub fn substitute(&self, name: &str, value: &Rational) -> Result<MultiPoly> {
        let Some(i) = self.index_of(name) else {
            return Ok(self.clone());
        };
        let mut terms: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[i];
            if k < 0 && value.is_zero() {
                return Err(Error::InvalidParameters(format!(
                    "substituting 0 for `{name}` which has negative exponent {k}"
                )));
            }
            let factor = rational_pow(value, k);
            if factor.is_zero() {
                continue;
            }
            let mut rest = e.clone();
            rest[i] = 0;
            *terms.entry(rest).or_insert_with(Rational::zero) += c * factor;
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { vars: self.vars.clone(), terms }.pruned_registry())
    }

    /// Evaluates every variable that occurs; missing assignments are an error.
    pub fn evaluate(&self, values: &HashMap<String, Rational>) -> Result<Rational> {
        let mut p = self.pruned_registry();
        for v in p.vars.clone().iter() {
            let value = values.get(&v.name).ok_or_else(|| Error::UnknownVariable(v.name.clone()))?;
            p = p.substitute(&v.name, value)?;
        }
        Ok(p.constant_term())
    }

    /// Drops registry entries that no term uses.
    pub fn pruned_registry(&self) -> MultiPoly {
        let used: Vec<usize> = (0..self.vars.len()).filter(|&i| self.terms.keys().any(|e| e[i] != 0)).collect();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let vars: Vec<Variable> = used.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self.terms.iter().map(|(e, c)| (used.iter().map(|&i| e[i]).collect(), c.clone())).collect();
        MultiPoly { vars: Arc::new(vars), terms }
    }

    /// Canonical, registry-independent rendering of each term, sorted.
    /// Variables inside a term appear in natural name order (`c2` < `c10`).
    pub fn canonical_terms(&self) -> Vec<String> {
        let mut order: Vec<usize> = (0..self.vars.len()).collect();
        order.sort_by(|&a, &b| natural_key(&self.vars[a].name).cmp(&natural_key(&self.vars[b].name)));
        let mut keyed: Vec<(Vec<(NaturalKey, i32)>, String)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut key = Vec::new();
                let mut s = format!("{}/{}", c.numer(), c.denom());
                for &i in &order {
                    if e[i] != 0 {
                        key.push((natural_key(&self.vars[i].name), e[i]));
                        s.push('*');
                        s.push_str(&self.vars[i].name);
                        if e[i] != 1 {
                            s.push_str(&format!("^{}", e[i]));
                        }
                    }
                }
                (key, s)
            })
            .collect();
        keyed.sort();
        keyed.into_iter().map(|(_, s)| s).collect()
    }

    fn with_registry(&self, vars: &Arc<Vec<Variable>>) -> MultiPoly {
        if Arc::ptr_eq(&self.vars, vars) || *self.vars == **vars {
            return MultiPoly { vars: vars.clone(), terms: self.terms.clone() };
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|x| x.name == v.name).expect("registry is a superset"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut out = vec![0; vars.len()];
                for (k, &x) in e.iter().enumerate() {
                    out[map[k]] = x;
                }
                (out, c.clone())
            })
            .collect();
        MultiPoly { vars: vars.clone(), terms }
    }

    fn union_registry(a: &Arc<Vec<Variable>>, b: &Arc<Vec<Variable>>) -> Arc<Vec<Variable>> {
        if Arc::ptr_eq(a, b) || a == b {
            return a.clone();
        }
        let mut out: Vec<Variable> = (**a).clone();
        for v in b.iter() {
            match out.iter_mut().find(|x| x.name == v.name) {
                Some(x) => x.laurent |= v.laurent,
                None => out.push(v.clone()),
            }
        }
        if out == **a {
            a.clone()
        } else {
            Arc::new(out)
        }
    }

    fn aligned(&self, other: &MultiPoly) -> (MultiPoly, MultiPoly) {
        let vars = Self::union_registry(&self.vars, &other.vars);
        (self.with_registry(&vars), other.with_registry(&vars))
    }

    fn same_registry(&self, other: &MultiPoly) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }

    fn add_scaled(&mut self, other: &MultiPoly, sign: bool) {
        if other.is_zero() {
            return;
        }
        if !self.same_registry(other) {
            let (a, b) = self.aligned(other);
            *self = a;
            return self.add_scaled(&b, sign);
        }
        for (e, c) in &other.terms {
            match self.terms.get_mut(e) {
                Some(x) => {
                    if sign {
                        *x += c;
                    } else {
                        *x -= c;
                    }
                    if x.is_zero() {
                        self.terms.remove(e);
                    }
                }
                None => {
                    self.terms.insert(e.clone(), if sign { c.clone() } else { -c.clone() });
                }
            }
        }
    }

    fn product(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if !self.same_registry(other) {
            let (a, b) = self.aligned(other);
            return a.product(&b);
        }
        let mut terms: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                match terms.get_mut(&e) {
                    Some(x) => *x += c,
                    None => {
                        terms.insert(e, c);
                    }
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { vars: self.vars.clone(), terms }
    }
}

pub(crate) fn rational_pow(base: &Rational, k: i32) -> Rational {
    if k >= 0 {
        num_traits::pow(base.clone(), k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

type NaturalKey = (String, u64, String);

fn natural_key(name: &str) -> NaturalKey {
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (head, tail) = name.split_at(split);
    let digits: String = tail.chars().take_while(|c| c.is_ascii_digit()).collect();
    let rest = tail[digits.len()..].to_string();
    (head.to_string(), digits.parse().unwrap_or(0), rest)
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.same_registry(other) {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", self.canonical_terms().join(" + "))
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        self.add_scaled(rhs, true);
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        self.add_scaled(rhs, false);
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.product(rhs)
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += &rhs;
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        self -= &rhs;
        self
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self.product(&rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> Self {
        iter.fold(MultiPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}
