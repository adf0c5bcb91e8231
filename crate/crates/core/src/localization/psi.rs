//! Descendant integrals on M̄_{0,k}.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::algebra::rational::{factorial, from_bigint, Rational};
use crate::error::{Error, Result};

fn check_arity(k: usize) -> Result<()> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("M̄_(0,{k}) is unstable")));
    }
    Ok(())
}

/// ∫_{M̄_{0,k}} ψ_1^{a_1}⋯ψ_k^{a_k} = (k−3)!/∏a_j! when Σa_j = k − 3, else 0.
pub fn psi_integral(exponents: &[usize]) -> Result<Rational> {
    let k = exponents.len();
    check_arity(k)?;
    if exponents.iter().sum::<usize>() != k - 3 {
        return Ok(Rational::zero());
    }
    let den = exponents.iter().fold(num_bigint::BigInt::one(), |acc, &e| acc * factorial(e as u64));
    Ok(from_bigint(factorial(k as u64 - 3)) / from_bigint(den))
}

/// The same integral computed only from ⟨τ_0³⟩ = 1 and the string equation.
pub fn psi_by_string_equation(exponents: &[usize]) -> Result<Rational> {
    check_arity(exponents.len())?;
    let mut key = exponents.to_vec();
    key.sort_unstable();
    Ok(string_rec(&key, &mut HashMap::new()))
}

fn string_rec(sorted: &[usize], memo: &mut HashMap<Vec<usize>, Rational>) -> Rational {
    let k = sorted.len();
    if sorted.iter().sum::<usize>() != k - 3 {
        return Rational::zero();
    }
    if k == 3 {
        return Rational::one();
    }
    if let Some(v) = memo.get(sorted) {
        return v.clone();
    }
    // Σa_j = k − 3 < k forces a τ_0; remove it and lower each other exponent in turn.
    let rest = &sorted[1..];
    let mut total = Rational::zero();
    for j in 0..rest.len() {
        if rest[j] == 0 {
            continue;
        }
        let mut lowered = rest.to_vec();
        lowered[j] -= 1;
        lowered.sort_unstable();
        total += string_rec(&lowered, memo);
    }
    memo.insert(sorted.to_vec(), total.clone());
    total
}

/// All vectors of `parts` nonnegative integers summing to `total`, in lexicographic order.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut tail in weak_compositions(total - first, parts - 1) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn small_values() {
        assert_eq!(psi_integral(&[0, 0, 0]).unwrap(), rat(1));
        assert_eq!(psi_integral(&[1, 0, 0, 0]).unwrap(), rat(1));
        assert_eq!(psi_integral(&[1, 1, 0, 0, 0]).unwrap(), rat(2));
        assert_eq!(psi_integral(&[2, 0, 0, 0, 0]).unwrap(), rat(1));
        assert_eq!(psi_integral(&[1, 0, 0]).unwrap(), rat(0));
        assert!(psi_integral(&[0, 0]).is_err());
        assert!(psi_by_string_equation(&[]).is_err());
    }

    #[test]
    fn closed_form_matches_string_equation() {
        for k in 3..=8 {
            for total in 0..=k - 2 {
                for e in weak_compositions(total, k) {
                    assert_eq!(psi_integral(&e).unwrap(), psi_by_string_equation(&e).unwrap(), "{e:?}");
                }
            }
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(weak_compositions(3, 3).len(), 10);
        assert_eq!(weak_compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(weak_compositions(2, 0).is_empty());
    }
}
