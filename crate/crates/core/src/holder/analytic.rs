//! Closed-form test functions and their textual descriptors.
//!
//! Descriptor grammar: `kind:key=value,key=value,...` with kinds
//!
//! | kind       | function                                   | keys (defaults)                              |
//! |------------|--------------------------------------------|----------------------------------------------|
//! | `const`    | `c`                                        | `c`                                          |
//! | `monomial` | `c · tᵖ · Π xᵢ^{eᵢ}`                       | `c` (1), `t` (0), `x1`, `x2`, … (0)          |
//! | `abs`      | `c · |x|ᵖ`                                 | `c` (1), `p`                                 |
//! | `sinexp`   | `e^{−a t} sin(k x₁)`                       | `a` (1), `k` (1)                             |
//! | `trig`     | random band-limited sum, see [`BandLimited`] | `seed`, `dim` (1), `terms` (4), `freq` (2), `tfreq` (1) |

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{math, Error, Result};

/// `Σⱼ aⱼ cos(ξⱼ·x + ωⱼ t + φⱼ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandLimited {
    pub amplitudes: Vec<f64>,
    pub wavevectors: Vec<Vec<f64>>,
    pub frequencies: Vec<f64>,
    pub phases: Vec<f64>,
}

impl BandLimited {
    /// Random instance: `ξ` uniform in `[−freq, freq]ⁿ`, `ω` uniform in
    /// `[−tfreq, tfreq]`, `φ` uniform in `[0, 2π)`, amplitudes uniform in
    /// `[−1, 1]` scaled by `1/terms`.
    pub fn random(seed: u64, dim: usize, terms: usize, freq: f64, tfreq: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Self { amplitudes: Vec::new(), wavevectors: Vec::new(), frequencies: Vec::new(), phases: Vec::new() };
        for _ in 0..terms {
            out.amplitudes.push(rng.random_range(-1.0..1.0) / terms as f64);
            out.wavevectors.push((0..dim).map(|_| rng.random_range(-freq..=freq)).collect());
            out.frequencies.push(if tfreq > 0.0 { rng.random_range(-tfreq..=tfreq) } else { 0.0 });
            out.phases.push(rng.random_range(0.0..core::f64::consts::TAU));
        }
        out
    }

    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        self.derivative(&[], 0, x, t)
    }

    /// `∂ₜʲ ∇_α` of the sum; an empty `alpha` means no spatial derivative.
    pub fn derivative(&self, alpha: &[usize], j: usize, x: &[f64], t: f64) -> f64 {
        let order = alpha.iter().sum::<usize>() + j;
        let shift = order as f64 * core::f64::consts::FRAC_PI_2;
        let mut acc = 0.0;
        for i in 0..self.amplitudes.len() {
            let xi = &self.wavevectors[i];
            let mut factor = self.amplitudes[i] * math::powi(self.frequencies[i], j as i32);
            for (a, &p) in alpha.iter().enumerate() {
                factor *= math::powi(xi[a], p as i32);
            }
            let phase: f64 = xi.iter().zip(x).map(|(k, y)| k * y).sum::<f64>() + self.frequencies[i] * t + self.phases[i];
            acc += factor * math::cos(phase + shift);
        }
        acc
    }
}

/// Analytic functions addressable by a descriptor string.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticFunction {
    Constant(f64),
    Monomial { coeff: f64, t_power: u32, powers: Vec<u32> },
    Abs { coeff: f64, power: f64 },
    SinExp { rate: f64, wavenumber: f64 },
    Trig { seed: u64, dim: usize, terms: usize, freq: f64, tfreq: f64, field: BandLimited },
}

impl AnalyticFunction {
    pub fn trig(seed: u64, dim: usize, terms: usize, freq: f64, tfreq: f64) -> Self {
        let field = BandLimited::random(seed, dim, terms, freq, tfreq);
        Self::Trig { seed, dim, terms, freq, tfreq, field }
    }

    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Monomial { coeff, t_power, powers } => {
                let mut v = coeff * math::powi(t, *t_power as i32);
                for (i, &p) in powers.iter().enumerate() {
                    v *= math::powi(x.get(i).copied().unwrap_or(0.0), p as i32);
                }
                v
            }
            Self::Abs { coeff, power } => {
                let r = math::sqrt(x.iter().map(|v| v * v).sum());
                coeff * math::powf(r, *power)
            }
            Self::SinExp { rate, wavenumber } => math::exp(-rate * t) * math::sin(wavenumber * x[0]),
            Self::Trig { field, .. } => field.eval(x, t),
        }
    }
}

fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::Descriptor { input: input.to_string(), reason: reason.into() }
}

fn num<T: FromStr>(input: &str, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| parse_err(input, format!("bad value `{v}` for `{key}`")))
}

impl FromStr for AnalyticFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut pairs: Vec<(&str, &str)> = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| parse_err(s, format!("`{item}` is not key=value")))?;
            pairs.push((k.trim(), v.trim()));
        }
        let get = |key: &str| pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let allow = |keys: &[&str]| -> Result<()> {
            match pairs.iter().find(|(k, _)| !keys.contains(k) && !(keys.contains(&"x*") && k.starts_with('x'))) {
                Some((k, _)) => Err(parse_err(s, format!("unknown key `{k}` for `{kind}`"))),
                None => Ok(()),
            }
        };
        let f64_or = |key: &str, d: f64| get(key).map_or(Ok(d), |v| num::<f64>(s, key, v));
        let usize_or = |key: &str, d: usize| get(key).map_or(Ok(d), |v| num::<usize>(s, key, v));
        match kind.trim() {
            "const" => {
                allow(&["c"])?;
                Ok(Self::Constant(f64_or("c", 0.0)?))
            }
            "monomial" => {
                allow(&["c", "t", "x*"])?;
                let mut powers = Vec::new();
                for (k, v) in &pairs {
                    if let Some(idx) = k.strip_prefix('x') {
                        let i: usize = num(s, k, idx)?;
                        if i == 0 {
                            return Err(parse_err(s, "coordinates are numbered from x1"));
                        }
                        if powers.len() < i {
                            powers.resize(i, 0);
                        }
                        powers[i - 1] = num(s, k, v)?;
                    }
                }
                let t_power = get("t").map_or(Ok(0), |v| num::<u32>(s, "t", v))?;
                Ok(Self::Monomial { coeff: f64_or("c", 1.0)?, t_power, powers })
            }
            "abs" => {
                allow(&["c", "p"])?;
                let power = get("p").ok_or_else(|| parse_err(s, "`abs` needs `p`"))?;
                Ok(Self::Abs { coeff: f64_or("c", 1.0)?, power: num(s, "p", power)? })
            }
            "sinexp" => {
                allow(&["a", "k"])?;
                Ok(Self::SinExp { rate: f64_or("a", 1.0)?, wavenumber: f64_or("k", 1.0)? })
            }
            "trig" => {
                allow(&["seed", "dim", "terms", "freq", "tfreq"])?;
                let seed = get("seed").map_or(Ok(0), |v| num::<u64>(s, "seed", v))?;
                let dim = usize_or("dim", 1)?;
                if dim == 0 {
                    return Err(parse_err(s, "`dim` must be positive"));
                }
                Ok(Self::trig(seed, dim, usize_or("terms", 4)?, f64_or("freq", 2.0)?, f64_or("tfreq", 1.0)?))
            }
            other => Err(parse_err(s, format!("unknown kind `{other}`"))),
        }
    }
}

impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "const:c={c}"),
            Self::Monomial { coeff, t_power, powers } => {
                write!(f, "monomial:c={coeff},t={t_power}")?;
                for (i, p) in powers.iter().enumerate() {
                    write!(f, ",x{}={p}", i + 1)?;
                }
                Ok(())
            }
            Self::Abs { coeff, power } => write!(f, "abs:c={coeff},p={power}"),
            Self::SinExp { rate, wavenumber } => write!(f, "sinexp:a={rate},k={wavenumber}"),
            Self::Trig { seed, dim, terms, freq, tfreq, .. } => {
                write!(f, "trig:seed={seed},dim={dim},terms={terms},freq={freq},tfreq={tfreq}")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let m: AnalyticFunction = "monomial:x1=4".parse().unwrap();
        assert_eq!(m.eval(&[2.0, 5.0], 1.0), 16.0);
        let m: AnalyticFunction = "monomial:c=2,t=1,x2=1".parse().unwrap();
        assert_eq!(m.eval(&[7.0, 3.0], 0.5), 3.0);
        let a: AnalyticFunction = "abs:p=0.5".parse().unwrap();
        assert_eq!(a.eval(&[0.25], 0.0), 0.5);
        let c: AnalyticFunction = "const:c=-1.5".parse().unwrap();
        assert_eq!(c.eval(&[0.0], 3.0), -1.5);
        let s: AnalyticFunction = "sinexp:a=2,k=1".parse().unwrap();
        assert!((s.eval(&[1.0], 0.5) - (-1.0f64).exp() * 1.0f64.sin()).abs() < 1e-15);
        let t: AnalyticFunction = "trig:seed=3,dim=2".parse().unwrap();
        assert_eq!(t, AnalyticFunction::trig(3, 2, 4, 2.0, 1.0));
    }

    #[test]
    fn display_round_trips() {
        for d in ["const:c=2", "monomial:c=1,t=2,x1=0,x2=3", "abs:c=1,p=0.5", "sinexp:a=1,k=2", "trig:seed=9,dim=2,terms=3,freq=1.5,tfreq=0.5"] {
            let f: AnalyticFunction = d.parse().unwrap();
            assert_eq!(f.to_string(), d);
            assert_eq!(f.to_string().parse::<AnalyticFunction>().unwrap(), f);
        }
    }

    #[test]
    fn rejects_malformed_descriptors() {
        for d in ["nope:c=1", "abs:c=1", "const:c=x", "monomial:y=2", "monomial:x0=1", "trig:dim=0", "const:c"] {
            assert!(matches!(d.parse::<AnalyticFunction>(), Err(Error::Descriptor { .. })), "{d}");
        }
    }

    #[test]
    fn band_limited_derivatives_match_difference_quotients() {
        let f = BandLimited::random(11, 2, 5, 2.0, 1.0);
        let (x, t, h) = ([0.3, -0.2], 0.4, 1e-5);
        let dx = (f.eval(&[x[0] + h, x[1]], t) - f.eval(&[x[0] - h, x[1]], t)) / (2.0 * h);
        assert!((dx - f.derivative(&[1, 0], 0, &x, t)).abs() < 1e-8);
        let dt = (f.eval(&x, t + h) - f.eval(&x, t - h)) / (2.0 * h);
        assert!((dt - f.derivative(&[0, 0], 1, &x, t)).abs() < 1e-8);
        let d2 = (f.derivative(&[1, 0], 0, &[x[0], x[1] + h], t) - f.derivative(&[1, 0], 0, &[x[0], x[1] - h], t)) / (2.0 * h);
        assert!((d2 - f.derivative(&[1, 1], 0, &x, t)).abs() < 1e-8);
    }
}
