//! Polynomial reconstruction in one variable from integer samples.

use super::poly::{MultiPoly, Variable};
use super::rational::{int, Rational};
use crate::error::{Error, Result};

pub fn j_variable() -> Variable {
    Variable::ordinary("j")
}

/// Reconstructs the polynomial in `j` of degree at most `degree_bound` through
/// the first `degree_bound + 1` samples and checks it against every remaining
/// sample. Sample values must not themselves mention `j`.
pub fn interpolate_in_j(samples: &[(i64, MultiPoly)], degree_bound: usize) -> Result<MultiPoly> {
    interpolate(&j_variable(), samples, degree_bound)
}

pub fn interpolate(var: &Variable, samples: &[(i64, MultiPoly)], degree_bound: usize) -> Result<MultiPoly> {
    let needed = degree_bound + 1;
    if samples.len() < needed {
        return Err(Error::NotEnoughSamples { needed, got: samples.len() });
    }
    for (i, (x, value)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::InvalidParameters(format!("duplicate interpolation node {x}")));
        }
        if value.index_of(&var.name).is_some() && value.degree_range(&var.name)?.is_some_and(|r| r != (0, 0)) {
            return Err(Error::InvalidParameters(format!("sample at {x} already depends on `{}`", var.name)));
        }
    }

    let (nodes, rest) = samples.split_at(needed);
    let xs: Vec<Rational> = nodes.iter().map(|(x, _)| int(*x)).collect();

    // Newton divided differences, in place.
    let mut dd: Vec<MultiPoly> = nodes.iter().map(|(_, v)| v.clone()).collect();
    for level in 1..needed {
        for i in (level..needed).rev() {
            let denom = &xs[i] - &xs[i - level];
            dd[i] = (&dd[i] - &dd[i - 1]).scale(&denom.recip());
        }
    }

    let jv = MultiPoly::var(var);
    let mut p = dd[needed - 1].clone();
    for i in (0..needed - 1).rev() {
        let shifted = &jv - &MultiPoly::constant(xs[i].clone());
        p = &(&p * &shifted) + &dd[i];
    }
    let p = p.with_variables(std::slice::from_ref(var));

    for (x, value) in rest {
        let at = p.substitute(&var.name, &int(*x))?;
        if !(&at - value).is_zero() {
            return Err(Error::PolynomialityViolation { j: *x, degree_bound });
        }
    }
    Ok(p)
}

/// `j (j-1) ... (j-m+1)` as a polynomial in `var`.
pub fn falling_factorial(var: &Variable, m: usize) -> MultiPoly {
    let jv = MultiPoly::var(var);
    (0..m).fold(MultiPoly::one(), |acc, i| {
        let factor = if i == 0 { jv.clone() } else { &jv - &MultiPoly::constant(int(i as i64)) };
        &acc * &factor
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn j() -> MultiPoly {
        MultiPoly::var(&j_variable())
    }

    #[test]
    fn constant_samples() {
        let s: Vec<_> = (1..=3).map(|x| (x, MultiPoly::one())).collect();
        assert_eq!(interpolate_in_j(&s, 0).unwrap(), MultiPoly::one());
    }

    #[test]
    fn triangular_numbers() {
        let s: Vec<_> = (2..=5).map(|x| (x, MultiPoly::constant(ratio(x * (x - 1), 2)))).collect();
        let p = interpolate_in_j(&s, 2).unwrap();
        assert_eq!(p, (&j().pow(2) - &j()).scale(&ratio(1, 2)));
    }

    #[test]
    fn surplus_disagreement_is_reported() {
        let mut s: Vec<_> = (0..4).map(|x| (x, MultiPoly::constant(int(x * x)))).collect();
        s.push((4, MultiPoly::constant(int(17))));
        assert!(matches!(interpolate_in_j(&s, 3), Err(Error::PolynomialityViolation { j: 4, degree_bound: 3 })));
    }

    #[test]
    fn too_few_and_duplicate_nodes() {
        let s = vec![(1, MultiPoly::one())];
        assert!(matches!(interpolate_in_j(&s, 1), Err(Error::NotEnoughSamples { .. })));
        let s = vec![(1, MultiPoly::one()), (1, MultiPoly::one())];
        assert!(interpolate_in_j(&s, 1).is_err());
    }

    #[test]
    fn multipoly_valued_samples() {
        let u = MultiPoly::var(&Variable::ordinary("u2"));
        // samples of (j^3 - 2j) u2
        let s: Vec<_> = (3..9).map(|x| (x, u.scale(&int(x * x * x - 2 * x)))).collect();
        let p = interpolate_in_j(&s, 3).unwrap();
        assert_eq!(p, &(&j().pow(3) - &j().scale(&int(2))) * &u);
    }

    #[test]
    fn falling_factorial_values() {
        let ff = falling_factorial(&j_variable(), 3);
        assert_eq!(ff.substitute("j", &int(5)).unwrap().constant_term(), int(60));
        assert_eq!(ff.substitute("j", &int(2)).unwrap().constant_term(), int(0));
        assert_eq!(falling_factorial(&j_variable(), 0), MultiPoly::one());
    }
}
