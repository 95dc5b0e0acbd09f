//! Initial-data descriptors for half-sphere fields.
//!
//! | kind     | field                                        | keys (defaults)                                   |
//! |----------|----------------------------------------------|---------------------------------------------------|
//! | `single` | `c·φ_{l,m}`                                  | `l`, `m` (0), `c` (1)                             |
//! | `random` | `N(0,1)·(1+λ)^{−decay}` per mode             | `seed` (0), `lmax` (4), `decay` (1), `kernel` (`keep`) |
//!
//! `kernel=drop` zeroes the `l ≤ 1` coefficients.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use parabolic_lab_core::experiments::seeded_field;
use parabolic_lab_core::spectral::{ModeBasis, SpectralField};
use parabolic_lab_core::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum FieldDescriptor {
    Single { l: u32, m: i32, c: f64 },
    Random { seed: u64, lmax: u32, decay: f64, drop_kernel: bool },
}

fn bad(input: &str, reason: impl Into<String>) -> Error {
    Error::Descriptor { input: input.to_string(), reason: reason.into() }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut pairs = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| bad(s, format!("`{item}` is not key=value")))?;
            pairs.push((k.trim(), v.trim()));
        }
        let allowed: &[&str] = match kind {
            "single" => &["l", "m", "c"],
            "random" => &["seed", "lmax", "decay", "kernel"],
            _ => return Err(bad(s, format!("unknown kind `{kind}`"))),
        };
        if let Some((k, _)) = pairs.iter().find(|(k, _)| !allowed.contains(k)) {
            return Err(bad(s, format!("unknown key `{k}` for `{kind}`")));
        }
        let get = |key: &str| pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        fn num<T: FromStr>(s: &str, key: &str, v: Option<&str>, default: Option<T>) -> Result<T> {
            match v {
                Some(v) => v.parse().map_err(|_| bad(s, format!("bad value `{v}` for `{key}`"))),
                None => default.ok_or_else(|| bad(s, format!("missing `{key}`"))),
            }
        }
        Ok(match kind {
            "single" => FieldDescriptor::Single {
                l: num(s, "l", get("l"), None)?,
                m: num(s, "m", get("m"), Some(0))?,
                c: num(s, "c", get("c"), Some(1.0))?,
            },
            _ => FieldDescriptor::Random {
                seed: num(s, "seed", get("seed"), Some(0))?,
                lmax: num(s, "lmax", get("lmax"), Some(4))?,
                decay: num(s, "decay", get("decay"), Some(1.0))?,
                drop_kernel: match get("kernel").unwrap_or("keep") {
                    "keep" => false,
                    "drop" => true,
                    other => return Err(bad(s, format!("kernel must be keep or drop, got `{other}`"))),
                },
            },
        })
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Single { l, m, c } => write!(f, "single:l={l},m={m},c={c}"),
            FieldDescriptor::Random { seed, lmax, decay, drop_kernel } => {
                let kernel = if *drop_kernel { "drop" } else { "keep" };
                write!(f, "random:seed={seed},lmax={lmax},decay={decay},kernel={kernel}")
            }
        }
    }
}

impl FieldDescriptor {
    /// Smallest degree cap that holds the field.
    pub fn degree(&self) -> u32 {
        match self {
            FieldDescriptor::Single { l, .. } => *l,
            FieldDescriptor::Random { lmax, .. } => *lmax,
        }
    }

    /// The field on `ModeBasis::enumerate(max(l_max, degree))`.
    pub fn build(&self, l_max: u32) -> Result<SpectralField> {
        let basis = Arc::new(ModeBasis::enumerate(l_max.max(self.degree()))?);
        match *self {
            FieldDescriptor::Single { l, m, c } => Ok(SpectralField::mode(basis, l, m)?.scaled(c)),
            FieldDescriptor::Random { seed, decay, drop_kernel, .. } => {
                let field = seeded_field(seed, &basis, decay);
                if drop_kernel {
                    Ok(field.split_parallel_perp()?.1)
                } else {
                    Ok(field)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let d: FieldDescriptor = "single:l=2,m=0".parse().unwrap();
        assert_eq!(d, FieldDescriptor::Single { l: 2, m: 0, c: 1.0 });
        let r: FieldDescriptor = "random:seed=3,kernel=drop".parse().unwrap();
        assert_eq!(r.to_string().parse::<FieldDescriptor>().unwrap(), r);
    }

    #[test]
    fn rejects_malformed_input() {
        for s in ["single", "single:l=x", "single:l=2,q=1", "cosine:l=1", "random:kernel=maybe", "single:l"] {
            assert!(matches!(s.parse::<FieldDescriptor>(), Err(Error::Descriptor { .. })), "{s}");
        }
    }

    #[test]
    fn builds_fields() {
        let f = "single:l=2,m=0,c=2".parse::<FieldDescriptor>().unwrap().build(0).unwrap();
        assert_eq!(f.basis().l_max(), 2);
        assert!((f.l2_norm() - 2.0).abs() < 1e-15);
        assert!("single:l=2,m=1".parse::<FieldDescriptor>().unwrap().build(2).is_err());
        let g = "random:seed=1,lmax=4,kernel=drop".parse::<FieldDescriptor>().unwrap().build(4).unwrap();
        let (par, _) = g.split_parallel_perp().unwrap();
        assert_eq!(par.l2_norm(), 0.0);
    }
}
