//! Fixed-locus integrands assembled edge by edge and vertex by vertex.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::psi::{psi_integral, weak_compositions};
use super::trees::DecoratedTree;
use crate::algebra::rational::{pow, powi, rat, Rational};
use crate::algebra::{Poly, RatFn, Ring};
use crate::equivariant::AlphaSpec;
use crate::error::{Error, Result};

/// Equivariant class pulled back along an evaluation map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassSpec {
    /// φ_i = ∏_{k≠i}(x − α_k).
    FixedPoint(usize),
    XPower(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Descendant {
    Power(usize),
    /// 1/(ℏ_s − ψ) in propagator slot s ∈ {0, 1}.
    Propagator(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Insertion {
    pub class: ClassSpec,
    pub descendant: Descendant,
}

impl Insertion {
    pub fn new(class: ClassSpec, descendant: Descendant) -> Self {
        Self { class, descendant }
    }
}

/// Per-mark integrand data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertionSpec {
    pub marks: Vec<Insertion>,
}

impl InsertionSpec {
    pub fn new(marks: Vec<Insertion>) -> Result<Self> {
        let mut slots: Vec<usize> = marks
            .iter()
            .filter_map(|ins| match ins.descendant {
                Descendant::Propagator(s) => Some(s),
                Descendant::Power(_) => None,
            })
            .collect();
        slots.sort_unstable();
        if slots.iter().any(|&s| s > 1) || slots.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams(format!("propagator slots {slots:?} must be distinct and in {{0, 1}}")));
        }
        Ok(Self { marks })
    }

    /// Mark 1 carries φ_i and a propagator, mark 2 carries x^{p+1}.
    pub fn z_p(i: usize, p: i64) -> Result<Self> {
        if p < -1 {
            return Err(Error::InvalidParams(format!("p = {p} is below −1")));
        }
        Self::new(vec![
            Insertion::new(ClassSpec::FixedPoint(i), Descendant::Propagator(0)),
            Insertion::new(ClassSpec::XPower((p + 1) as usize), Descendant::Power(0)),
        ])
    }

    /// φ_i/(ℏ₁ − ψ₁) and φ_j/(ℏ₂ − ψ₂).
    pub fn two_point(i: usize, j: usize) -> Result<Self> {
        Self::new(vec![
            Insertion::new(ClassSpec::FixedPoint(i), Descendant::Propagator(0)),
            Insertion::new(ClassSpec::FixedPoint(j), Descendant::Propagator(1)),
        ])
    }

    /// τ_{a1}H^{b1}, τ_{a2}H^{b2}.
    pub fn descendants(pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(a, b)| Insertion::new(ClassSpec::XPower(b), Descendant::Power(a)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.marks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }
}

/// Which euler class twists the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistMode {
    Untwisted,
    V0,
    /// 𝒱₀′: sections vanishing at the named mark (conventionally the first).
    V0Prime(usize),
    /// 𝒱₀″: sections vanishing at the named mark (conventionally the second).
    V0DoublePrime(usize),
}

impl TwistMode {
    fn quotient_mark(self) -> Option<usize> {
        match self {
            TwistMode::V0Prime(j) | TwistMode::V0DoublePrime(j) => Some(j),
            _ => None,
        }
    }
}

/// Σ_t f_t(ℏ₁)·g_t(ℏ₂).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SplitValue {
    pub terms: Vec<(RatFn, RatFn)>,
}

impl SplitValue {
    pub fn scalar(c: Rational) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        Self {
            terms: vec![(RatFn::constant(c), RatFn::one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Self { terms }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let terms = self
            .terms
            .iter()
            .flat_map(|(f, g)| rhs.terms.iter().map(move |(f2, g2)| (f.clone() * f2, g.clone() * g2)))
            .filter(|(f, g)| !f.is_zero() && !g.is_zero())
            .collect();
        Self { terms }
    }

    fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::default();
        }
        Self {
            terms: self.terms.iter().map(|(f, g)| (f.scale(c), g.clone())).collect(),
        }
    }

    /// The value as a function of ℏ₁ with ℏ₂ fixed at `h2`.
    pub fn at_second(&self, h2: &Rational) -> Result<RatFn> {
        self.terms
            .iter()
            .try_fold(RatFn::zero(), |acc, (f, g)| Ok(acc + &f.scale(&g.eval(h2)?)))
    }

    /// Collapses a value whose second factors are constants.
    pub fn single(&self) -> Result<RatFn> {
        let mut acc = RatFn::zero();
        for (f, g) in &self.terms {
            if !g.is_polynomial() || g.num().degree().unwrap_or(0) > 0 {
                return Err(Error::InvalidParams("value depends on the second propagator".into()));
            }
            acc = acc + &f.scale(&g.num().coeff(0));
        }
        Ok(acc)
    }

    /// Collapses a value with no propagator dependence.
    pub fn number(&self) -> Result<Rational> {
        let f = self.single()?;
        if !f.is_polynomial() || f.num().degree().unwrap_or(0) > 0 {
            return Err(Error::InvalidParams("value depends on the first propagator".into()));
        }
        Ok(f.num().coeff(0))
    }
}

/// A fixed-locus contribution split into its scalar and propagator-dependent parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Contribution {
    /// Edge normal factors, twist, vertex weights, class restrictions and 1/(|Aut|·∏δ).
    pub scalar: Rational,
    /// Vertex moduli integrals and leaf propagators.
    pub vertex_part: SplitValue,
}

impl Contribution {
    pub fn value(&self) -> SplitValue {
        self.vertex_part.scale(&self.scalar)
    }
}

fn nonzero(f: Rational, what: impl FnOnce() -> String) -> Result<Rational> {
    if f.is_zero() {
        return Err(Error::Resonance(what()));
    }
    Ok(f)
}

/// Tangent weight (α_{μ(v)} − α_{μ(w)})/δ of the edge cover at the end over v.
fn flag_weight(t: &DecoratedTree, spec: &AlphaSpec, v: usize, edge: usize, w: usize) -> Rational {
    (&spec.alpha[t.labels[v]] - &spec.alpha[t.labels[w]]) / rat(t.edges[edge].degree as i64)
}

/// e(H⁰(C_e, f*Tℙ^{n−1})^{mov}) = (−1)^δ∏_{r=1}^{δ}(rω)²·∏_{r=0}^{δ}∏_{k≠i,j}(α_i − α_k + rω), ω = (α_j − α_i)/δ.
pub fn edge_normal_euler(spec: &AlphaSpec, i: usize, j: usize, delta: usize) -> Result<Rational> {
    let al = &spec.alpha;
    let omega = (&al[j] - &al[i]) / rat(delta as i64);
    let mut e = if delta.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    for r in 1..=delta {
        let f = &omega * rat(r as i64);
        e *= &f * &f;
    }
    for r in 0..=delta {
        for k in (0..spec.n).filter(|&k| k != i && k != j) {
            e *= &al[i] - &al[k] + &omega * rat(r as i64);
        }
    }
    nonzero(e, || format!("edge {}–{} of degree {delta} has a zero normal weight", i + 1, j + 1))
}

/// ∏_{r=0}^{aδ}(aα_i + r(α_j − α_i)/δ): sections of f*O(a) over the edge.
pub fn edge_twist(spec: &AlphaSpec, a: usize, i: usize, j: usize, delta: usize) -> Rational {
    let al = &spec.alpha;
    let omega = (&al[j] - &al[i]) / rat(delta as i64);
    let base = &al[i] * rat(a as i64);
    (0..=a * delta).fold(Rational::one(), |acc, r| acc * (&base + &omega * rat(r as i64)))
}

fn class_value(class: ClassSpec, spec: &AlphaSpec, label: usize) -> Rational {
    match class {
        ClassSpec::FixedPoint(i) if i == label => spec.weight(i).recip(),
        ClassSpec::FixedPoint(_) => Rational::zero(),
        ClassSpec::XPower(p) => pow(&spec.alpha[label], p as u32),
    }
}

/// Moduli integral at a vertex of total valence ≥ 3.
fn stable_vertex(flags: &[Rational], marks: &[Descendant]) -> Result<SplitValue> {
    let k = flags.len() + marks.len();
    let fixed: usize = marks
        .iter()
        .map(|m| match m {
            Descendant::Power(b) => *b,
            Descendant::Propagator(_) => 0,
        })
        .sum();
    let Some(free_total) = (k - 3).checked_sub(fixed) else {
        return Ok(SplitValue::default());
    };
    let props: Vec<(usize, usize)> = marks
        .iter()
        .enumerate()
        .filter_map(|(pos, m)| match m {
            Descendant::Propagator(s) => Some((pos, *s)),
            Descendant::Power(_) => None,
        })
        .collect();
    let mut collected: BTreeMap<(Option<usize>, Option<usize>), Rational> = BTreeMap::new();
    for split in weak_compositions(free_total, flags.len() + props.len()) {
        let (flag_exps, prop_exps) = split.split_at(flags.len());
        let mut exps: Vec<usize> = flag_exps.to_vec();
        exps.extend(marks.iter().map(|m| match m {
            Descendant::Power(b) => *b,
            Descendant::Propagator(_) => 0,
        }));
        let mut slot_powers = (None, None);
        for (&(pos, slot), &e) in props.iter().zip(prop_exps) {
            exps[flags.len() + pos] = e;
            if slot == 0 {
                slot_powers.0 = Some(e);
            } else {
                slot_powers.1 = Some(e);
            }
        }
        let mut c = psi_integral(&exps)?;
        if c.is_zero() {
            continue;
        }
        // 1/(ω − ψ) = Σ ψ^e/ω^{e+1}
        for (w, &e) in flags.iter().zip(flag_exps) {
            c /= pow(w, e as u32 + 1);
        }
        *collected.entry(slot_powers).or_insert_with(Rational::zero) += c;
    }
    let h = |e: Option<usize>| e.map_or_else(RatFn::one, |e| RatFn::h_pow(-(e as i64) - 1));
    Ok(SplitValue {
        terms: collected
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((e0, e1), c)| (h(e0).scale(&c), h(e1)))
            .collect(),
    })
}

/// 1/(ℏ − ψ) with ψ = −ω in slot `slot`.
fn leaf_propagator(slot: usize, omega: &Rational) -> Result<SplitValue> {
    let f = RatFn::new(Poly::one(), Poly::linear(omega.clone(), Rational::one()))?;
    Ok(SplitValue {
        terms: vec![if slot == 0 { (f, RatFn::one()) } else { (RatFn::one(), f) }],
    })
}

/// The fixed-locus integral of the decorated tree `t` with the given insertions and twist.
pub fn graph_contribution(
    t: &DecoratedTree,
    ins: &InsertionSpec,
    twist: TwistMode,
    spec: &AlphaSpec,
    a: usize,
) -> Result<Contribution> {
    if t.marks.len() != ins.len() {
        return Err(Error::InvalidParams(format!("{} marks but {} insertions", t.marks.len(), ins.len())));
    }
    if t.labels.iter().any(|&l| l >= spec.n) {
        return Err(Error::InvalidParams("vertex label exceeds the number of weights".into()));
    }
    if t.edges.is_empty() {
        return Err(Error::Valence("degree-zero trees are not fixed loci of positive degree".into()));
    }
    let al = &spec.alpha;
    let twisted = twist != TwistMode::Untwisted;
    let mut scalar = Rational::one();
    let zero = || Contribution {
        scalar: Rational::zero(),
        vertex_part: SplitValue::default(),
    };

    for e in &t.edges {
        let (i, j) = (t.labels[e.ends.0], t.labels[e.ends.1]);
        scalar /= edge_normal_euler(spec, i, j, e.degree)?;
        if twisted {
            scalar *= edge_twist(spec, a, i, j, e.degree);
        }
        scalar /= rat(e.degree as i64);
    }
    scalar /= rat(t.aut as i64);

    let mut vertex_part = SplitValue::scalar(Rational::one());
    for v in 0..t.vertex_count() {
        let mu = t.labels[v];
        let flags = t.flags(v);
        let marks = t.marks_at(v);
        let val_e = flags.len() as i64;
        // e(Tℙ)|_{P_μ}^{val−1}, where `weight` is its inverse
        scalar *= powi(&spec.weight(mu), 1 - val_e)?;
        if twisted {
            let ax = nonzero(&al[mu] * rat(a as i64), || format!("aα_{} vanishes", mu + 1))?;
            scalar *= powi(&ax, 1 - val_e)?;
        }
        for &j in &marks {
            scalar *= class_value(ins.marks[j].class, spec, mu);
        }
        if scalar.is_zero() {
            return Ok(zero());
        }
        let weights: Vec<Rational> = flags.iter().map(|&(k, w)| flag_weight(t, spec, v, k, w)).collect();
        let descendants: Vec<Descendant> = marks.iter().map(|&j| ins.marks[j].descendant).collect();
        let factor = match (weights.len(), descendants.as_slice()) {
            (f, m) if f + m.len() >= 3 => stable_vertex(&weights, m)?,
            (1, []) => SplitValue::scalar(weights[0].clone()),
            (2, []) => {
                let s = nonzero(&weights[0] + &weights[1], || format!("node smoothing at a vertex labelled {} vanishes", mu + 1))?;
                SplitValue::scalar(s.recip())
            }
            (1, [Descendant::Power(b)]) => SplitValue::scalar(pow(&-weights[0].clone(), *b as u32)),
            (1, [Descendant::Propagator(s)]) => leaf_propagator(*s, &weights[0])?,
            (f, m) => return Err(Error::Valence(format!("{f} edges and {} marks at one vertex", m.len()))),
        };
        vertex_part = vertex_part.mul(&factor);
        if vertex_part.is_zero() {
            return Ok(zero());
        }
    }
    if let Some(j) = twist.quotient_mark() {
        let v = *t.marks.get(j).ok_or_else(|| Error::InvalidParams(format!("no mark {j} to quotient")))?;
        let ax = nonzero(&al[t.labels[v]] * rat(a as i64), || "aα vanishes at the quotient mark".into())?;
        scalar /= ax;
    }
    Ok(Contribution { scalar, vertex_part })
}
