//! Fixed-point sums over all decorated trees of a given degree.

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::contribution::{graph_contribution, InsertionSpec, SplitValue, TwistMode};
use super::trees::{enumerate_trees, DecoratedTree, DegreeGuard};
use crate::algebra::rational::{encode, pow, Rational};
use crate::algebra::{RatFn, Var};
use crate::equivariant::{AlphaSpec, FixedPointSeries};
use crate::error::{Error, Result};
use crate::mirror::InvariantKey;

/// Degree limit for oracle sums; 2 by default, 3 on request.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleGuard {
    pub d_max: usize,
}

impl Default for OracleGuard {
    fn default() -> Self {
        Self { d_max: 2 }
    }
}

impl OracleGuard {
    pub fn extended() -> Self {
        Self { d_max: 3 }
    }

    fn check(self, d: usize) -> Result<()> {
        if d > self.d_max {
            return Err(Error::Guard(format!("oracle degree {d} exceeds {}", self.d_max)));
        }
        if d == 3 {
            eprintln!("warning: degree-3 localization sums are slow");
        }
        Ok(())
    }
}

/// What to sum.
#[derive(Clone, Debug, PartialEq)]
pub enum OracleTarget {
    /// [u^d]𝒵_p(ℏ, α_i, u) at every fixed point.
    ZP(i64),
    /// The degree ≥ 1 part of 𝒵̃(ℏ₁, ℏ₂, α_i, α_j).
    TwoPoint,
    /// ∫ e(𝒱₀)·∏ψ_j^{β_j}ev_j*η_j in each degree.
    ZEtaBeta(InsertionSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleOutput {
    Series(FixedPointSeries),
    TwoPoint(TwoPointOracle),
    /// Index d − 1.
    Values(Vec<SplitValue>),
}

/// `values[d − 1][i][j]` = [u^d]𝒵̃(ℏ₁, ℏ₂, α_i, α_j).
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPointOracle {
    pub values: Vec<Vec<Vec<SplitValue>>>,
}

/// Σ over `trees` of the contributions.
pub fn sum_contributions(
    trees: &[DecoratedTree],
    ins: &InsertionSpec,
    twist: TwistMode,
    spec: &AlphaSpec,
    a: usize,
) -> Result<SplitValue> {
    trees
        .par_iter()
        .map(|t| Ok(graph_contribution(t, ins, twist, spec, a)?.value()))
        .try_reduce(SplitValue::default, |x, y| Ok(x.add(&y)))
}

fn trees_for(spec: &AlphaSpec, d: usize, m: usize, guard: OracleGuard) -> Result<Vec<DecoratedTree>> {
    guard.check(d)?;
    enumerate_trees(spec.n, d, m, DegreeGuard(guard.d_max.max(1)))
}

/// 𝒵_p at every fixed point, to order `d_max`, from localization.
pub fn oracle_zp(p: i64, spec: &AlphaSpec, a: usize, d_max: usize, guard: OracleGuard) -> Result<FixedPointSeries> {
    if p < -1 || p >= spec.n as i64 {
        return Err(Error::InvalidParams(format!("p = {p} outside −1..={}", spec.n - 1)));
    }
    let mut coeffs = vec![vec![RatFn::zero(); d_max + 1]; spec.n];
    for (i, row) in coeffs.iter_mut().enumerate() {
        row[0] = RatFn::constant(pow(&spec.alpha[i], (p + 1) as u32));
    }
    for d in 1..=d_max {
        let trees = trees_for(spec, d, 2, guard)?;
        for (i, row) in coeffs.iter_mut().enumerate() {
            let relevant: Vec<DecoratedTree> = trees.iter().filter(|t| t.labels[t.marks[0]] == i).cloned().collect();
            let ins = InsertionSpec::z_p(i, p)?;
            row[d] = sum_contributions(&relevant, &ins, TwistMode::V0DoublePrime(1), spec, a)?.single()?;
        }
    }
    Ok(FixedPointSeries::from_fn(spec.n, Var::U, d_max, |i, d| coeffs[i][d].clone()))
}

/// The degree ≥ 1 coefficients of 𝒵̃ from localization.
pub fn oracle_two_point(spec: &AlphaSpec, a: usize, d_max: usize, guard: OracleGuard) -> Result<TwoPointOracle> {
    let n = spec.n;
    let mut values = Vec::with_capacity(d_max);
    for d in 1..=d_max {
        let trees = trees_for(spec, d, 2, guard)?;
        let mut per_i = Vec::with_capacity(n);
        for i in 0..n {
            let mut per_j = Vec::with_capacity(n);
            for j in 0..n {
                let relevant: Vec<DecoratedTree> = trees
                    .iter()
                    .filter(|t| t.labels[t.marks[0]] == i && t.labels[t.marks[1]] == j)
                    .cloned()
                    .collect();
                per_j.push(sum_contributions(&relevant, &InsertionSpec::two_point(i, j)?, TwistMode::V0, spec, a)?);
            }
            per_i.push(per_j);
        }
        values.push(per_i);
    }
    Ok(TwoPointOracle { values })
}

/// ⟨τ_{a1}H^{b1}, τ_{a2}H^{b2}⟩_d by localization; an α-free number when the key has the right dimension.
pub fn oracle_invariant(key: &InvariantKey, spec: &AlphaSpec, a: usize, guard: OracleGuard) -> Result<Rational> {
    key.validate(spec.n)?;
    let expected = key.expected_dimension(spec.n, a);
    if key.dimension() != expected {
        return Ok(Rational::zero());
    }
    let ins = InsertionSpec::descendants(&[(key.a1, key.b1), (key.a2, key.b2)])?;
    let trees = trees_for(spec, key.d, 2, guard)?;
    sum_contributions(&trees, &ins, TwistMode::V0, spec, a)?.number()
}

/// Dispatches on the target.
pub fn oracle_series(target: &OracleTarget, spec: &AlphaSpec, a: usize, d_max: usize, guard: OracleGuard) -> Result<OracleOutput> {
    match target {
        OracleTarget::ZP(p) => oracle_zp(*p, spec, a, d_max, guard).map(OracleOutput::Series),
        OracleTarget::TwoPoint => oracle_two_point(spec, a, d_max, guard).map(OracleOutput::TwoPoint),
        OracleTarget::ZEtaBeta(ins) => (1..=d_max)
            .map(|d| sum_contributions(&trees_for(spec, d, ins.len(), guard)?, ins, TwistMode::V0, spec, a))
            .collect::<Result<Vec<_>>>()
            .map(OracleOutput::Values),
    }
}

fn split_json(v: &SplitValue) -> Value {
    Value::Array(
        v.terms
            .iter()
            .map(|(f, g)| json!({ "h1": f.to_string(), "h2": g.to_string() }))
            .collect(),
    )
}

/// Every tree of degree `d` with its contribution, for inspection.
pub fn debug_dump(
    spec: &AlphaSpec,
    d: usize,
    ins: &InsertionSpec,
    twist: TwistMode,
    a: usize,
    guard: OracleGuard,
) -> Result<Value> {
    let trees = trees_for(spec, d, ins.len(), guard)?;
    let entries = trees
        .iter()
        .map(|t| {
            let c = graph_contribution(t, ins, twist, spec, a)?;
            Ok(json!({
                "labels": t.labels,
                "edges": t.edges,
                "marks": t.marks,
                "aut": t.aut,
                "canonical": t.canonical().0,
                "scalar": encode(&c.scalar),
                "vertex_part": split_json(&c.vertex_part),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "n": spec.n,
        "a": a,
        "d": d,
        "alpha": spec.alpha.iter().map(encode).collect::<Vec<_>>(),
        "insertions": ins,
        "twist": twist,
        "trees": entries,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};
    use crate::algebra::Ring;
    use crate::equivariant::identities::EquivariantZ;
    use crate::equivariant::ladder::EquivariantLadder;
    use crate::equivariant::check_recursive;
    use crate::hypergeometric::build_i_table;
    use crate::localization::contribution::{ClassSpec, Descendant, Insertion};

    fn ladder_z(n: usize, a: usize, d: usize) -> EquivariantZ {
        let spec = AlphaSpec::generic(n, d, 0).unwrap();
        let t = build_i_table(n, a, n - 1, d).unwrap();
        EquivariantZ::new(EquivariantLadder::build(&spec, &t).unwrap()).unwrap()
    }

    #[test]
    fn z_p_matches_the_mirror_side() {
        for (n, a) in [(2, 2), (3, 3), (3, 2)] {
            let f = ladder_z(n, a, 2);
            for p in -1..n as i64 {
                let oracle = oracle_zp(p, &f.ladder.spec, a, 2, OracleGuard::default()).unwrap();
                assert_eq!(&oracle, f.z_p(p), "n = {n}, a = {a}, p = {p}");
            }
        }
    }

    #[test]
    fn graph_types_split_poles_from_laurent_parts() {
        let (n, a, p) = (3, 3, 0);
        let spec = AlphaSpec::generic(n, 2, 0).unwrap();
        let z = oracle_zp(p, &spec, a, 1, OracleGuard::default()).unwrap();
        let trees = enumerate_trees(n, 2, 2, DegreeGuard::default()).unwrap();
        for i in 0..n {
            let ins = InsertionSpec::z_p(i, p).unwrap();
            let mine: Vec<&DecoratedTree> = trees.iter().filter(|t| t.labels[t.marks[0]] == i).collect();
            let (leaf, stable): (Vec<&DecoratedTree>, Vec<&DecoratedTree>) =
                mine.into_iter().partition(|t| t.flags(t.marks[0]).len() == 1 && t.marks_at(t.marks[0]).len() == 1);
            for t in stable {
                let v = graph_contribution(t, &ins, TwistMode::V0DoublePrime(1), &spec, a).unwrap().value();
                assert!(v.single().unwrap().is_laurent_in_h(), "{t:?}");
            }
            for j in (0..n).filter(|&j| j != i) {
                for d0 in 1..=2 {
                    let group: Vec<DecoratedTree> = leaf
                        .iter()
                        .filter(|t| {
                            let (k, w) = t.flags(t.marks[0])[0];
                            t.labels[w] == j && t.edges[k].degree == d0
                        })
                        .map(|t| (*t).clone())
                        .collect();
                    let got = sum_contributions(&group, &ins, TwistMode::V0DoublePrime(1), &spec, a).unwrap().single().unwrap();
                    let c = (&spec.alpha[j] - &spec.alpha[i]) / rat(d0 as i64);
                    let residue = crate::equivariant::recursion_coeff(&spec, a, i, j, d0).unwrap()
                        * z.coeff(j, 2 - d0).eval(&c).unwrap();
                    let want = RatFn::new(crate::algebra::Poly::constant(residue), crate::algebra::Poly::linear(-c, rat(1))).unwrap();
                    assert_eq!(got, want, "i = {i}, j = {j}, d0 = {d0}");
                }
            }
        }
    }

    #[test]
    fn degree_one_oracle_is_recursive() {
        let spec = AlphaSpec::generic(2, 1, 0).unwrap();
        let z = oracle_zp(-1, &spec, 2, 1, OracleGuard::default()).unwrap();
        assert!(check_recursive(&z, &spec, 2, 1).unwrap().passed());
    }

    #[test]
    fn two_point_matches_the_mirror_side() {
        let (n, a) = (3, 3);
        let f = ladder_z(n, a, 2);
        let spec = &f.ladder.spec;
        let oracle = oracle_two_point(spec, a, 2, OracleGuard::default()).unwrap();
        let aa = rat(a as i64);
        for h2 in [ratio(7, 3), rat(-5), ratio(11, 2)] {
            for d in 1..=2 {
                for i in 0..n {
                    for j in 0..n {
                        // a/(ℏ₁+ℏ₂)·Σ_r(−1)^rσ_r Σ_{p+q=n−1−r} 𝒵_p(ℏ₁, α_i)𝒵_{q−1}(ℏ₂, α_j)
                        let mut mirror = RatFn::zero();
                        for r in 0..n {
                            let w = if r % 2 == 0 { &aa * &spec.sigma[r] } else { -(&aa * &spec.sigma[r]) };
                            for p in 0..n - r {
                                let q = n - 1 - r - p;
                                for d1 in 0..=d {
                                    let right = f.z_p(q as i64 - 1).coeff(j, d - d1).eval(&h2).unwrap();
                                    mirror = mirror + &f.z_p(p as i64).coeff(i, d1).scale(&(&w * &right));
                                }
                            }
                        }
                        let sum = RatFn::linear(h2.clone(), rat(1));
                        let mirror = mirror * &sum.inv().unwrap();
                        assert_eq!(oracle.values[d - 1][i][j].at_second(&h2).unwrap(), mirror, "d = {d}, i = {i}, j = {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn projective_plane_counts() {
        // one line through two points, one conic through five
        let spec = AlphaSpec::from_ints(&[2, 3, 7]).unwrap();
        let point = Insertion::new(ClassSpec::XPower(2), Descendant::Power(0));
        for (d, m) in [(1, 2), (2, 5)] {
            let ins = InsertionSpec::new(vec![point; m]).unwrap();
            let trees = enumerate_trees(3, d, m, DegreeGuard::default()).unwrap();
            let n_d = sum_contributions(&trees, &ins, TwistMode::Untwisted, &spec, 0).unwrap().number().unwrap();
            assert_eq!(n_d, rat(1), "d = {d}");
        }
    }

    #[test]
    fn quintic_unmarked_counts() {
        let spec = AlphaSpec::from_ints(&[1, 3, 7, 12, 20]).unwrap();
        let ins = InsertionSpec::new(Vec::new()).unwrap();
        let expected = [rat(2875), ratio(4876875, 8)];
        for (d, want) in (1..=2).zip(expected) {
            let trees = enumerate_trees(5, d, 0, DegreeGuard::default()).unwrap();
            let v = sum_contributions(&trees, &ins, TwistMode::V0, &spec, 5).unwrap().number().unwrap();
            assert_eq!(v, want, "d = {d}");
        }
    }

    #[test]
    fn invariants_ignore_the_weights() {
        let key = InvariantKey::new(1, (0, 1), (0, 1));
        let guard = OracleGuard::default();
        let s1 = AlphaSpec::from_ints(&[1, 3, 7, 12, 20]).unwrap();
        let s2 = AlphaSpec::from_ints(&[-2, 5, 9, 4, 31]).unwrap();
        assert_eq!(oracle_invariant(&key, &s1, 5, guard).unwrap(), rat(2875));
        assert_eq!(oracle_invariant(&key, &s2, 5, guard).unwrap(), rat(2875));
    }

    #[test]
    fn guard_is_enforced() {
        let spec = AlphaSpec::generic(2, 3, 0).unwrap();
        assert!(matches!(oracle_zp(-1, &spec, 2, 3, OracleGuard::default()), Err(Error::Guard(_))));
    }

    #[test]
    fn dump_lists_every_tree() {
        let spec = AlphaSpec::generic(2, 1, 0).unwrap();
        let v = debug_dump(&spec, 1, &InsertionSpec::z_p(0, 0).unwrap(), TwistMode::V0DoublePrime(1), 2, OracleGuard::default()).unwrap();
        assert_eq!(v["trees"].as_array().unwrap().len(), 4);
    }
}
