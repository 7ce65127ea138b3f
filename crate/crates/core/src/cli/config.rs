//! Flat `key = value` configuration with documented defaults.

use std::collections::BTreeMap;

use crate::error::{LabError, Result};
use crate::expanding_map::{extend_map, ModelParams};

/// Every accepted key with its default and a one-line description.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("mu", "1.95", "expansion coefficient of f"),
    ("rho", "0.75", "exponent of f, lambda2 / lambda3 for the cube flow"),
    ("c", "0.45", "|H| limit at the stable leaf"),
    ("b", "0.25", "contraction coefficient of H"),
    ("nu", "2", "exponent of H, -lambda1 / lambda3"),
    ("lambda1", "-4", "strong stable eigenvalue"),
    ("lambda2", "-1.5", "weak stable eigenvalue"),
    ("lambda3", "2", "unstable eigenvalue"),
    ("r0", "1", "tube transit time"),
    ("eps_ext", "0", "section extension beyond [-1, 1]"),
    ("seed", "1", "seed for random starting points"),
    ("grid", "100", "grid size for cone and axiom checks"),
    ("alpha", "auto", "cone aperture; auto = 1/(sqrt2 - 1)"),
    ("J", "0.10,0.11", "interval for the onto certificate"),
    ("depth_cap", "64", "iteration depth cap"),
    ("depth", "24", "kneading depth"),
    ("word", "RL", "periodic word"),
    ("word2", "sigma", "second measure for measure-dist: a word or sigma"),
    ("word_p", "RL", "first horseshoe word"),
    ("word_q", "RLL", "second horseshoe word"),
    ("steps", "101", "measure path steps"),
    ("block_depth", "auto", "block sequence depth for Bernoulli averages"),
    ("t", "0.5", "Bernoulli parameter"),
    ("measure", "bernoulli", "measure for entropy and support: word, bernoulli or empirical"),
    ("returns", "100000", "returns of the empirical orbit"),
    ("approx_tol", "0.05", "distance tolerance for periodic approximation"),
    ("eps", "0.1", "support coverage grid scale"),
    ("side", "plus", "perturbed unstable branch: plus or minus"),
    ("target", "0", "connection target: a coordinate or a periodic word"),
    ("connect_tol", "1e-10", "connection residual tolerance"),
    ("eta", "0.05", "bump half-width"),
    ("lambda_margin", "1.43", "slope floor kept by the perturbation"),
    ("tau", "auto", "parameter range; auto = tau_max"),
    ("count", "8", "loop family size"),
    ("k0", "16", "first loop member passes at e^-k0"),
    ("exact_max_k", "24", "loop members up to this k are solved directly"),
    ("target_word", "RL", "isolation target orbit"),
    ("max_len", "12", "isolation word length bound"),
    ("caps", "8,10,12", "length caps reported by the isolation lab"),
    ("r_v", "0.02", "radius of the target neighbourhood"),
    ("kind", "map-graph", "plot kind: map-graph, orbit-trace, path-profile, loop-family"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            values: KEYS.iter().map(|(k, v, _)| (k.to_string(), v.to_string())).collect(),
        }
    }
}

fn bad(key: &str, value: &str, what: &str) -> LabError {
    LabError::Input(format!("{key} = {value:?}: expected {what}"))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match self.values.get_mut(key) {
            Some(v) => {
                *v = value.to_string();
                Ok(())
            }
            None => Err(LabError::Input(format!("unknown key {key:?}"))),
        }
    }

    /// Apply one `key=value` setting.
    pub fn apply_setting(&mut self, s: &str) -> Result<()> {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| LabError::Input(format!("setting {s:?} is not key=value")))?;
        self.set(k.trim(), v.trim())
    }

    /// Apply a config file: `key = value` lines, `#` comments.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            self.apply_setting(line)
                .map_err(|e| LabError::Input(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn from_values(values: &BTreeMap<String, String>) -> Result<Self> {
        let mut c = RunConfig::default();
        for (k, v) in values {
            c.set(k, v)?;
        }
        Ok(c)
    }

    /// Config file text reproducing this configuration.
    pub fn to_text(&self) -> String {
        KEYS.iter()
            .map(|(k, _, doc)| format!("# {doc}\n{k} = {}\n", self.values[*k]))
            .collect()
    }

    pub fn str(&self, key: &str) -> &str {
        &self.values[key]
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let v = self.str(key);
        v.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| bad(key, v, "a finite number"))
    }

    /// `None` for `auto`.
    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        if self.str(key) == "auto" {
            Ok(None)
        } else {
            self.f64(key).map(Some)
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let v = self.str(key);
        v.parse::<usize>().map_err(|_| bad(key, v, "a non-negative integer"))
    }

    pub fn opt_usize(&self, key: &str) -> Result<Option<usize>> {
        if self.str(key) == "auto" {
            Ok(None)
        } else {
            self.usize(key).map(Some)
        }
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        let v = self.str(key);
        v.parse::<u64>().map_err(|_| bad(key, v, "a non-negative integer"))
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.str(key);
        v.split(',')
            .map(|p| p.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad(key, v, "comma-separated numbers"))
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        let v = self.str(key);
        v.split(',')
            .map(|p| p.trim().parse::<usize>().ok())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad(key, v, "comma-separated integers"))
    }

    pub fn model(&self) -> Result<ModelParams> {
        let p = ModelParams {
            mu: self.f64("mu")?,
            rho: self.f64("rho")?,
            c: self.f64("c")?,
            b: self.f64("b")?,
            nu: self.f64("nu")?,
            lambda1: self.f64("lambda1")?,
            lambda2: self.f64("lambda2")?,
            lambda3: self.f64("lambda3")?,
            r0: self.f64("r0")?,
            eps_ext: 0.0,
        };
        let eps = self.f64("eps_ext")?;
        if eps == 0.0 {
            p.ensure_finite()?;
            Ok(p)
        } else {
            extend_map(&p, eps)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reject() {
        let c = RunConfig::from_text("# comment\nmu = 1.9 # trailing\n\nword=RLL\n").unwrap();
        assert_eq!(c.f64("mu").unwrap(), 1.9);
        assert_eq!(c.str("word"), "RLL");
        assert!(RunConfig::from_text("mystery = 1").is_err());
        assert!(RunConfig::from_text("mu 1.9").is_err());
        assert!(RunConfig::default().set("steps", "x").is_ok());
    }

    #[test]
    fn text_round_trip() {
        let mut c = RunConfig::default();
        c.set("word", "RLLR").unwrap();
        c.set("eta", "0.04").unwrap();
        assert_eq!(RunConfig::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn defaults_give_default_model() {
        assert_eq!(RunConfig::default().model().unwrap(), ModelParams::default());
    }
}
