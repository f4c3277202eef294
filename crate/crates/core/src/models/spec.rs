use serde::{Deserialize, Serialize};

use super::lbit::LbitSpec;
use crate::error::{Error, Result};
use crate::memory::{CodeKind, PerturbationKind};

/// Declarative model description; realized by [`super::build_hamiltonian`].
///
/// Couplings use the spin convention `S = sigma / 2` for the XXZ and XX
/// chains and plain Pauli operators for the Ising chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    /// `sum J (SxSx + SySy) + Jz SzSz + sum h_i Sz_i`, `h_i ~ U[-disorder, disorder]`.
    DisorderedXxz { j: f64, jz: f64, disorder: f64 },
    /// Disordered XX chain (free fermions after Jordan-Wigner).
    AndersonXx { j: f64, disorder: f64 },
    /// Phenomenological l-bit model.
    Lbit(LbitSpec),
    /// `sum J ZZ + hx X + hz Z`, non-integrable for generic fields.
    ErgodicIsing { j: f64, hx: f64, hz: f64 },
    /// `-gap * sum S_j + strength * V` on a stabilizer code.
    StabilizerPerturbed {
        code: CodeKind,
        #[serde(default = "default_gap")]
        gap: f64,
        strength: f64,
        perturbation: PerturbationKind,
        #[serde(default = "LbitSpec::perturbation_default")]
        dressing: LbitSpec,
    },
}

fn default_gap() -> f64 {
    1.0
}

fn check_scale(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("model.{name} must be finite and non-negative, got {v}")))
    }
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("model.{name} must be finite, got {v}")))
    }
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModelSpec::DisorderedXxz { j, jz, disorder } => {
                check_finite("j", *j)?;
                check_finite("jz", *jz)?;
                check_scale("disorder", *disorder)
            }
            ModelSpec::AndersonXx { j, disorder } => {
                check_finite("j", *j)?;
                check_scale("disorder", *disorder)
            }
            ModelSpec::Lbit(spec) => spec.validate(),
            ModelSpec::ErgodicIsing { j, hx, hz } => {
                check_finite("j", *j)?;
                check_finite("hx", *hx)?;
                check_finite("hz", *hz)
            }
            ModelSpec::StabilizerPerturbed { gap, strength, dressing, .. } => {
                check_scale("gap", *gap)?;
                check_scale("strength", *strength)?;
                dressing.validate()
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::DisorderedXxz { .. } => "disordered-xxz",
            ModelSpec::AndersonXx { .. } => "anderson-xx",
            ModelSpec::Lbit(_) => "lbit",
            ModelSpec::ErgodicIsing { .. } => "ergodic-ising",
            ModelSpec::StabilizerPerturbed { .. } => "stabilizer-perturbed",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_tagged_toml() {
        let spec: ModelSpec = toml::from_str("variant = \"disordered-xxz\"\nj = 1.0\njz = 1.0\ndisorder = 8.0\n").unwrap();
        assert_eq!(spec, ModelSpec::DisorderedXxz { j: 1.0, jz: 1.0, disorder: 8.0 });
        let lbit: ModelSpec = toml::from_str("variant = \"lbit\"\nxi = 0.5\n").unwrap();
        assert!(matches!(lbit, ModelSpec::Lbit(ref s) if s.xi == 0.5 && s.range == 3));
    }

    #[test]
    fn rejects_negative_disorder_and_bad_xi() {
        assert!(ModelSpec::AndersonXx { j: 1.0, disorder: -1.0 }.validate().is_err());
        let bad = ModelSpec::Lbit(LbitSpec { xi: 0.0, ..LbitSpec::default() });
        assert!(bad.validate().is_err());
    }
}
