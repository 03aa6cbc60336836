//! Flat `key = value` run configuration.
//!
//! Values are layered: built-in defaults, then the config file, then command-line
//! overrides. Everything is kept as text until a command asks for a typed value, so
//! errors can always name the offending key.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use g2_analysis::Window;
use g2_geometries::{Family, Lambda2Base};
use g2_instantons::Bundle;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Every accepted key with its default. `auto` defers to a per-command choice.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("metric", "bs-spinor", "bs-spinor | bggg | lambda2-s4 | lambda2-cp2"),
    ("bundle", "p1", "p1 | pid"),
    ("params", "auto", "boundary parameters, comma separated"),
    ("tol", "1e-10", "integrator tolerance"),
    ("tmax", "auto", "end of integration in t (s for the Lambda2 metrics)"),
    ("t0", "1", "start of the flow integration"),
    ("grid", "20", "scan resolution, n or nxm"),
    ("f1p", "0:2", "BGGG P1 scan range lo:hi for f1+"),
    ("g1p", "0:2", "BGGG P1 scan range lo:hi for g1+"),
    ("range", "0:2", "scan range lo:hi for the single parameter of the other bundles"),
    ("boundary_tol", "1e-9", "distance to a region boundary reported as Undetermined"),
    ("x1", "100,1000,10000", "bubble and energy sweep values"),
    ("lambda", "1", "bubble scale"),
    ("window", "ball:2", "energy window: ball:R | shell:a:b | all"),
    ("samples", "200", "sample count for exports and profiles"),
    ("perturb", "false", "bump every verified connection (verify only)"),
    ("seed", "7", "seed for the random checks"),
    ("out", "out", "output directory"),
    ("threads", "0", "worker threads, 0 for all cores"),
];

/// Keys that do not change results and stay out of the hash.
const UNHASHED: &[&str] = &["out", "threads"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    BsSpinor,
    Bggg,
    Lambda2(Lambda2Base),
}

impl Metric {
    pub fn family(self) -> Option<Family> {
        match self {
            Metric::BsSpinor => Some(Family::BryantSalamon),
            Metric::Bggg => Some(Family::Bggg),
            Metric::Lambda2(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    command: String,
    values: BTreeMap<String, String>,
}

fn usage(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("key `{key}`: {msg}"))
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        let values = KEYS.iter().map(|(k, v, _)| (k.to_string(), v.to_string())).collect();
        Self { command: command.to_string(), values }
    }

    pub fn command(&self) -> &str {
        &self.command
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim();
        if !self.values.contains_key(key) {
            return Err(usage(key, "unknown key"));
        }
        self.values.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    /// `key=value`, as given to `--set`.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), CliError> {
        match pair.split_once('=') {
            Some((k, v)) => self.set(k, v),
            None => Err(CliError::Usage(format!("`{pair}` is not of the form key=value"))),
        }
    }

    pub fn parse_text(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("{origin}:{}: expected key = value", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        self.parse_text(&text, &path.display().to_string())
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or_else(|| panic!("undeclared key {key}"))
    }

    pub fn is_auto(&self, key: &str) -> bool {
        self.raw(key) == "auto"
    }

    /// Canonical `key=value` lines, sorted, excluding output plumbing.
    pub fn canonical(&self) -> String {
        let mut s = format!("command={}\n", self.command);
        for (k, v) in &self.values {
            if !UNHASHED.contains(&k.as_str()) {
                s.push_str(&format!("{k}={v}\n"));
            }
        }
        s
    }

    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    pub fn f64(&self, key: &str) -> Result<f64, CliError> {
        let v = self.raw(key);
        let x: f64 = v.parse().map_err(|_| usage(key, format!("expected a number, got `{v}`")))?;
        if !x.is_finite() {
            return Err(usage(key, format!("`{v}` is not finite")));
        }
        Ok(x)
    }

    pub fn positive(&self, key: &str) -> Result<f64, CliError> {
        let x = self.f64(key)?;
        if x <= 0.0 {
            return Err(usage(key, format!("must be > 0, got {x}")));
        }
        Ok(x)
    }

    pub fn opt_positive(&self, key: &str) -> Result<Option<f64>, CliError> {
        if self.is_auto(key) {
            Ok(None)
        } else {
            self.positive(key).map(Some)
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize, CliError> {
        let v = self.raw(key);
        v.parse().map_err(|_| usage(key, format!("expected a non-negative integer, got `{v}`")))
    }

    pub fn u64(&self, key: &str) -> Result<u64, CliError> {
        let v = self.raw(key);
        v.parse().map_err(|_| usage(key, format!("expected a non-negative integer, got `{v}`")))
    }

    pub fn bool(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key) {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            v => Err(usage(key, format!("expected true or false, got `{v}`"))),
        }
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let v = self.raw(key);
        let xs = v
            .split(',')
            .map(|p| p.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| usage(key, format!("expected comma-separated numbers, got `{v}`")))?;
        if xs.is_empty() {
            return Err(usage(key, "empty list"));
        }
        Ok(xs)
    }

    /// `lo:hi` with finite bounds.
    pub fn range(&self, key: &str) -> Result<(f64, f64), CliError> {
        let v = self.raw(key);
        let bad = || usage(key, format!("expected lo:hi, got `{v}`"));
        let (a, b) = v.split_once(':').ok_or_else(bad)?;
        let lo: f64 = a.trim().parse().map_err(|_| bad())?;
        let hi: f64 = b.trim().parse().map_err(|_| bad())?;
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(usage(key, format!("bounds must be finite with lo <= hi, got `{v}`")));
        }
        Ok((lo, hi))
    }

    /// `n` or `nxm`.
    pub fn grid(&self) -> Result<(usize, usize), CliError> {
        let v = self.raw("grid");
        let bad = || usage("grid", format!("expected n or nxm with n, m >= 1, got `{v}`"));
        let (a, b) = v.split_once('x').unwrap_or((v, v));
        let n: usize = a.trim().parse().map_err(|_| bad())?;
        let m: usize = b.trim().parse().map_err(|_| bad())?;
        if n == 0 || m == 0 {
            return Err(bad());
        }
        Ok((n, m))
    }

    pub fn metric(&self) -> Result<Metric, CliError> {
        match self.raw("metric") {
            "bs-spinor" => Ok(Metric::BsSpinor),
            "bggg" => Ok(Metric::Bggg),
            "lambda2-s4" => Ok(Metric::Lambda2(Lambda2Base::S4)),
            "lambda2-cp2" => Ok(Metric::Lambda2(Lambda2Base::CP2)),
            v => Err(usage("metric", format!("expected bs-spinor, bggg, lambda2-s4 or lambda2-cp2, got `{v}`"))),
        }
    }

    /// The R⁴×S³ family, or a usage error for the Λ² metrics.
    pub fn family(&self) -> Result<Family, CliError> {
        self.metric()?
            .family()
            .ok_or_else(|| usage("metric", format!("`{}` is not supported by `{}`", self.raw("metric"), self.command)))
    }

    pub fn bundle(&self) -> Result<Bundle, CliError> {
        self.raw("bundle").parse().map_err(|e: String| usage("bundle", e))
    }

    pub fn window(&self) -> Result<Window, CliError> {
        let v = self.raw("window");
        let bad = || usage("window", format!("expected ball:R, shell:a:b or all, got `{v}`"));
        let num = |s: &str| s.trim().parse::<f64>().ok().filter(|x| x.is_finite() && *x > 0.0).ok_or_else(bad);
        let parts: Vec<&str> = v.split(':').collect();
        match parts.as_slice() {
            ["all"] => Ok(Window::Everywhere),
            ["ball", r] => Ok(Window::Ball { radius: num(r)? }),
            ["shell", a, b] => {
                let (inner, outer) = (num(a)?, num(b)?);
                if inner >= outer {
                    return Err(bad());
                }
                Ok(Window::Shell { inner, outer })
            }
            _ => Err(bad()),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.raw("out"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layering_and_hash() {
        let mut a = RunConfig::new("scan");
        a.parse_text("# comment\ngrid = 8  # trailing\nmetric=bggg\n", "test").unwrap();
        assert_eq!(a.grid().unwrap(), (8, 8));
        let h = a.hash();
        a.set("out", "elsewhere").unwrap();
        a.set("threads", "3").unwrap();
        assert_eq!(a.hash(), h);
        a.set("tol", "1e-11").unwrap();
        assert_ne!(a.hash(), h);
        assert_ne!(RunConfig::new("flow").hash(), RunConfig::new("scan").hash());
    }

    #[test]
    fn typed_errors_name_the_key() {
        let mut c = RunConfig::new("scan");
        let e = c.set("colour", "red").unwrap_err().to_string();
        assert!(e.contains("colour"));
        c.set("tol", "-1").unwrap();
        assert!(c.positive("tol").unwrap_err().to_string().contains("tol"));
        c.set("f1p", "2:1").unwrap();
        assert!(c.range("f1p").is_err());
        c.set("grid", "4x0").unwrap();
        assert!(c.grid().is_err());
        c.set("window", "shell:3:2").unwrap();
        assert!(c.window().is_err());
        c.set("window", "shell:1:2").unwrap();
        assert_eq!(c.window().unwrap(), Window::Shell { inner: 1.0, outer: 2.0 });
        assert!(c.parse_text("no equals sign", "f").is_err());
    }
}
