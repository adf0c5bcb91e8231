//! The verification suites run by `verify`.

use mirror_gw_core::algebra::rational::{rat, Rational};
use mirror_gw_core::equivariant::identities::{check_identities, EquivariantZ, IdentitySuite};
use mirror_gw_core::equivariant::reconstruct::default_bound;
use mirror_gw_core::equivariant::transforms::inject_pole;
use mirror_gw_core::equivariant::{
    apply_transform, build_y_equivariant, check_mpc, check_recursive, reconstruct, AlphaSpec, EqVariant, EquivariantLadder, Failure,
    FixedPointSeries, MpcMode, ReconstructionSeed, Report, Transform,
};
use mirror_gw_core::hypergeometric::build_i_table;
use mirror_gw_core::localization::psi::weak_compositions;
use mirror_gw_core::localization::{oracle_zp, psi_by_string_equation, psi_integral, OracleGuard};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::Suite;
use crate::error::{CliError, CliResult};

/// Where a deliberate pole was added to 𝒴₋₁.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mutation {
    pub i: usize,
    pub d: usize,
    pub pole: String,
}

/// Everything the suites share: weights, the ladder and the subject pair (𝒴, 𝒴₋₁).
pub struct VerifyContext {
    pub spec: AlphaSpec,
    pub a: usize,
    pub d_max: usize,
    pub family: EquivariantZ,
    pub y: FixedPointSeries,
    pub y_minus_one: FixedPointSeries,
    pub mutation: Option<Mutation>,
}

/// Adds 1/(ℏ − (1 + α₂ − α₁)) to [u^d]𝒴₋₁(ℏ, α₁): a pole the recursion cannot explain.
fn mutate(y: &FixedPointSeries, spec: &AlphaSpec, d: usize) -> CliResult<(FixedPointSeries, Mutation)> {
    let c: Rational = rat(1) + &spec.alpha[1] - &spec.alpha[0];
    let m = inject_pole(y, 0, d, &c)?;
    Ok((
        m,
        Mutation {
            i: 0,
            d,
            pole: c.to_string(),
        },
    ))
}

impl VerifyContext {
    pub fn build(n: usize, a: usize, d_max: usize, alpha: Option<Vec<Rational>>, mutation: bool) -> CliResult<Self> {
        let spec = match alpha {
            Some(w) => {
                let s = AlphaSpec::new(w).map_err(|e| CliError::Config(format!("rejected weights: {e}")))?;
                s.check_generic(d_max)
                    .map_err(|e| CliError::Config(format!("weights {}: {e}", s.describe())))?;
                s
            }
            None => AlphaSpec::generic(n, d_max, 0)?,
        };
        let table = build_i_table(n, a, n - 1, d_max)?;
        let y = build_y_equivariant(&spec, &table, EqVariant::YOverX)?;
        let family = EquivariantZ::new(EquivariantLadder::build(&spec, &table)?)?;
        let clean = family.ladder.y(-1).clone();
        let (y_minus_one, mutation) = if mutation {
            let (m, info) = mutate(&clean, &spec, d_max.min(1))?;
            (m, Some(info))
        } else {
            (clean, None)
        };
        Ok(Self {
            spec,
            a,
            d_max,
            family,
            y,
            y_minus_one,
            mutation,
        })
    }

    fn params(&self) -> serde_json::Value {
        json!({"n": self.spec.n, "a": self.a, "alpha": self.spec.describe(), "d_max": self.d_max})
    }

    fn n(&self) -> usize {
        self.spec.n
    }

    pub fn run(&self, suite: Suite) -> Report {
        let result = match suite {
            Suite::Recursion => self.recursion(),
            Suite::Mpc => self.mpc(),
            Suite::Transforms => self.transforms(),
            Suite::Identities => self.identities(),
            Suite::Reconstruction => self.reconstruction(),
            Suite::Oracle => self.oracle(),
            Suite::Psi => Ok(psi_suite()),
        };
        let name = serde_json::to_value(suite).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        result.unwrap_or_else(|e| Report::new(name, self.params(), vec![Failure::at(None, None, format!("error: {e}"))]))
    }

    /// Runs the suites in parallel; the reports keep the requested order.
    pub fn run_all(&self, suites: &[Suite]) -> Vec<Report> {
        suites.par_iter().map(|&s| self.run(s)).collect()
    }

    fn recursion(&self) -> CliResult<Report> {
        let mut parts = Vec::new();
        for p in -1..self.n() as i64 {
            let subject = if p == -1 { &self.y_minus_one } else { self.family.ladder.y(p) };
            let mut r = check_recursive(subject, &self.spec, self.a, self.d_max)?;
            r.suite = format!("Y_{p}");
            parts.push(r);
        }
        Ok(Report::merge("recursion", self.params(), &parts))
    }

    fn mpc_pair(&self, y: &FixedPointSeries, z: &FixedPointSeries) -> CliResult<Vec<Failure>> {
        let interp = check_mpc(y, z, &self.spec, self.d_max, MpcMode::Interpolation)?;
        let mut failures = interp.failures.clone();
        match check_mpc(y, z, &self.spec, self.d_max, MpcMode::ZExpansion) {
            Ok(expanded) if expanded.passed() == interp.passed() => {}
            Ok(_) => failures.push(Failure::at(None, None, "checker modes return different verdicts")),
            Err(e) => failures.push(Failure::at(None, None, e.to_string())),
        }
        Ok(failures)
    }

    fn mpc(&self) -> CliResult<Report> {
        Ok(Report::new("mpc", self.params(), self.mpc_pair(&self.y, &self.y_minus_one)?))
    }

    fn transforms(&self) -> CliResult<Report> {
        let (mutant, _) = mutate(&self.y_minus_one, &self.spec, self.d_max.min(1))?;
        let mut failures = Vec::new();
        for t in Transform::samples() {
            let name = t.name();
            let (y2, z2) = apply_transform(&t, &self.y, &self.y_minus_one, &self.spec)?;
            for f in check_recursive(&z2, &self.spec, self.a, self.d_max)?.failures {
                failures.push(Failure::at(f.i, f.d, format!("{name}: recursion: {}", f.detail)));
            }
            for f in self.mpc_pair(&y2, &z2)? {
                failures.push(Failure::at(f.i, f.d, format!("{name}: mpc: {}", f.detail)));
            }
            let (_, bad) = apply_transform(&t, &self.y, &mutant, &self.spec)?;
            if check_recursive(&bad, &self.spec, self.a, self.d_max)?.passed() {
                failures.push(Failure::at(None, None, format!("{name}: a mutated series became recursive")));
            }
        }
        if let Some(m) = &self.mutation {
            failures.iter_mut().for_each(|f| f.detail = format!("{} (mutated 𝒴₋₁ at i = {}, d = {})", f.detail, m.i, m.d));
        }
        Ok(Report::new("transforms", self.params(), failures))
    }

    fn identities(&self) -> CliResult<Report> {
        let parts = IdentitySuite::ALL
            .iter()
            .map(|&s| check_identities(s, &self.family, self.d_max))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Report::merge("identities", self.params(), &parts))
    }

    fn reconstruction(&self) -> CliResult<Report> {
        let (spec, a, d, n) = (&self.spec, self.a, self.d_max, self.n());
        let z = &self.family.z;
        let mut failures = Vec::new();
        let mut seeds = Vec::new();
        for p in -1..n as i64 {
            let target = self.family.z_p(p).truncate(d);
            let seed = ReconstructionSeed::from_series(&target);
            if reconstruct(z, spec, a, &seed, default_bound(n), d)? != target {
                failures.push(Failure::at(None, None, format!("Z_{p} is not recovered from its polynomial part")));
            }
            seeds.push(seed);
        }
        if !reconstruct(z, spec, a, &ReconstructionSeed::zero(n, d), default_bound(n), d)?.is_zero() {
            failures.push(Failure::at(None, None, "zero seed reconstructs a nonzero series"));
        }
        let sum = reconstruct(z, spec, a, &seeds[1].add(&seeds[2]), default_bound(n), d)?;
        let parts = reconstruct(z, spec, a, &seeds[1], default_bound(n), d)?.add(&reconstruct(z, spec, a, &seeds[2], default_bound(n), d)?)?;
        if sum != parts {
            failures.push(Failure::at(None, None, "reconstruction is not additive in the seed"));
        }
        Ok(Report::new("reconstruction", self.params(), failures))
    }

    fn oracle(&self) -> CliResult<Report> {
        let guard = OracleGuard::default();
        let d = self.d_max.min(guard.d_max);
        let mut failures = Vec::new();
        for p in -1..self.n() as i64 {
            let oracle = oracle_zp(p, &self.spec, self.a, d, guard)?;
            let mirror = self.family.z_p(p).truncate(d);
            for i in 0..self.n() {
                for k in 0..=d {
                    if oracle.coeff(i, k) != mirror.coeff(i, k) {
                        failures.push(Failure::at(Some(i), Some(k), format!("Z_{p}: localization {} vs mirror {}", oracle.coeff(i, k), mirror.coeff(i, k))));
                    }
                }
            }
        }
        let mut params = self.params();
        params["oracle_d_max"] = json!(d);
        Ok(Report::new("oracle", params, failures))
    }
}

/// Closed-form ψ-integrals against the string-equation recursion for k ≤ 8.
pub fn psi_suite() -> Report {
    let mut failures = Vec::new();
    for k in 3..=8 {
        for total in 0..=k - 2 {
            for e in weak_compositions(total, k) {
                match (psi_integral(&e), psi_by_string_equation(&e)) {
                    (Ok(x), Ok(y)) if x == y => {}
                    (x, y) => failures.push(Failure::at(None, None, format!("{e:?}: {x:?} vs {y:?}"))),
                }
            }
        }
    }
    Report::new("psi", json!({"k_max": 8}), failures)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_small_size() {
        let ctx = VerifyContext::build(3, 3, 2, None, false).unwrap();
        for r in ctx.run_all(&Suite::ALL) {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn mutation_is_located() {
        let ctx = VerifyContext::build(3, 3, 2, None, true).unwrap();
        let r = ctx.run(Suite::Recursion);
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f.i == Some(0) && f.d == Some(1)));
        assert!(ctx.run(Suite::Psi).passed());
    }

    #[test]
    fn resonant_weights_are_rejected() {
        let alpha = vec![rat(1), rat(2), rat(3)];
        assert!(matches!(VerifyContext::build(3, 3, 3, Some(alpha), false), Err(CliError::Config(_))));
    }
}
