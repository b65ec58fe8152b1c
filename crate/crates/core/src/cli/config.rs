//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::ellipsoid_bounds::FParams;
use crate::error::{Error, Result};
use crate::nonuniqueness::choose_parameters;
use crate::sphere::ProblemParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Minkowski,
    Solve,
    Construct,
    Bounds,
    Sweep,
    Verify,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Minkowski,
        Command::Solve,
        Command::Construct,
        Command::Bounds,
        Command::Sweep,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Minkowski => "minkowski",
            Command::Solve => "solve",
            Command::Construct => "construct",
            Command::Bounds => "bounds",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Recognized keys, in manifest order.
pub const KEYS: [&str; 14] = [
    "command", "n", "p", "q", "alpha", "beta", "delta", "eps", "a-sweep", "N", "grading", "tol", "out",
    "seed",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `epsilon` holds the smallest swept value.
    pub params: ProblemParams,
    pub nodes: usize,
    pub grading: f64,
    pub eps: Vec<f64>,
    pub a_sweep: Vec<f64>,
    pub tol: f64,
    pub out: PathBuf,
    pub seed: u64,
}

/// Where a raw value came from, for error messages.
#[derive(Clone, Copy, Debug)]
enum Origin {
    Line(usize),
    Flag,
}

#[derive(Default)]
struct Raw(BTreeMap<&'static str, (String, Origin)>);

fn known(key: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|k| *k == key)
}

impl Raw {
    fn parse_text(text: &str) -> Result<Self> {
        let mut raw = Raw::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (k, v) = body.split_once('=').ok_or_else(|| Error::ConfigParse {
                line: line_no,
                message: format!("expected `key = value`, got `{body}`"),
            })?;
            let key = known(k.trim()).ok_or_else(|| Error::ConfigParse {
                line: line_no,
                message: format!("unknown key `{}`", k.trim()),
            })?;
            if raw.0.contains_key(key) {
                return Err(Error::ConfigParse {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
            raw.0.insert(key, (v.trim().to_string(), Origin::Line(line_no)));
        }
        Ok(raw)
    }

    fn error(&self, key: &str, message: String) -> Error {
        match self.0.get(key).map(|v| v.1) {
            Some(Origin::Line(line)) => Error::ConfigParse {
                line,
                message: format!("{key}: {message}"),
            },
            _ => Error::Config(format!("--{key}: {message}")),
        }
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some((v, _)) => v
                .parse()
                .map(Some)
                .map_err(|_| self.error(key, format!("cannot parse `{v}`"))),
        }
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some((v, _)) => v
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| self.error(key, format!("cannot parse list `{v}`"))),
        }
    }
}

pub const DEFAULT_EPS: [f64; 4] = [0.4, 0.2, 0.1, 0.05];
pub const DEFAULT_A_SWEEP: [f64; 4] = [1e2, 1e3, 1e4, 1e5];

/// Builds a validated configuration from optional file text and flag
/// overrides. Flags win over the file. Missing α, β, δ are chosen by the
/// construction's rule.
pub fn parse_config(file: Option<&str>, flags: &[(&str, String)]) -> Result<RunConfig> {
    let mut raw = match file {
        Some(text) => Raw::parse_text(text)?,
        None => Raw::default(),
    };
    for (k, v) in flags {
        let key = known(k).ok_or_else(|| Error::Config(format!("unknown flag --{k}")))?;
        raw.0.insert(key, (v.clone(), Origin::Flag));
    }
    let command_text: String = raw
        .get("command")?
        .ok_or_else(|| Error::Config("no command given".into()))?;
    let command = Command::parse(&command_text)
        .ok_or_else(|| raw.error("command", format!("unknown command `{command_text}`")))?;
    let n: usize = raw.get("n")?.unwrap_or(2);
    let p: f64 = raw.get("p")?.unwrap_or(-1.0);
    let q: f64 = raw.get("q")?.unwrap_or(0.5);
    let mut eps = raw.list("eps")?.unwrap_or_else(|| DEFAULT_EPS.to_vec());
    eps.sort_by(|a, b| b.total_cmp(a));
    let a_sweep = raw.list("a-sweep")?.unwrap_or_else(|| DEFAULT_A_SWEEP.to_vec());
    let nodes: usize = raw.get("N")?.unwrap_or(512);
    let grading: f64 = raw.get("grading")?.unwrap_or(2.0);
    let tol: f64 = raw.get("tol")?.unwrap_or(1e-4);
    let out: PathBuf = raw.get::<String>("out")?.unwrap_or_else(|| "out".into()).into();
    let seed: u64 = raw.get("seed")?.unwrap_or(0);
    let given: [Option<f64>; 3] = [raw.get("alpha")?, raw.get("beta")?, raw.get("delta")?];

    if nodes < 32 {
        return Err(raw.error("N", format!("N >= 32 violated (N = {nodes})")));
    }
    if !(grading >= 1.0) || !grading.is_finite() {
        return Err(raw.error("grading", format!("grading >= 1 violated (grading = {grading})")));
    }
    if !(tol > 0.0) {
        return Err(raw.error("tol", format!("tol > 0 violated (tol = {tol})")));
    }
    if eps.is_empty() || a_sweep.is_empty() {
        return Err(Error::Config("sweeps must not be empty".into()));
    }

    let needs_choice = given.iter().any(|v| v.is_none());
    let chosen = match command {
        Command::Minkowski | Command::Construct | Command::Sweep if needs_choice => {
            Some(choose_parameters(n, p, q)?)
        }
        _ => None,
    };
    let pick = |i: usize| given[i].or(chosen.map(|c| [c.0, c.1, c.2][i])).unwrap_or(0.0);
    let params = ProblemParams {
        n,
        p,
        q,
        alpha: pick(0),
        beta: pick(1),
        delta: pick(2),
        epsilon: *eps.last().unwrap_or(&0.25),
    };
    match command {
        Command::Minkowski | Command::Construct | Command::Sweep => {
            for &e in &eps {
                params.with_epsilon(e).validate()?;
            }
        }
        Command::Solve => {
            params.check_standing()?;
            params.check_weights()?;
        }
        Command::Bounds => FParams {
            n,
            p,
            q,
            alpha: params.alpha,
            beta: params.beta,
        }
        .check()?,
        Command::Verify => {
            if n < 2 {
                return Err(raw.error("n", format!("n >= 2 violated (n = {n})")));
            }
        }
    }
    Ok(RunConfig {
        command,
        params,
        nodes,
        grading,
        eps,
        a_sweep,
        tol,
        out,
        seed,
    })
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// The configuration as `key = value` text that `parse_config` reads back
/// to the same value.
pub fn to_config_text(cfg: &RunConfig) -> String {
    let p = &cfg.params;
    let mut s = String::new();
    let _ = writeln!(s, "command = {}", cfg.command.name());
    let _ = writeln!(s, "n = {}", p.n);
    let _ = writeln!(s, "p = {}", p.p);
    let _ = writeln!(s, "q = {}", p.q);
    let _ = writeln!(s, "alpha = {}", p.alpha);
    let _ = writeln!(s, "beta = {}", p.beta);
    let _ = writeln!(s, "delta = {}", p.delta);
    let _ = writeln!(s, "eps = {}", join(&cfg.eps));
    let _ = writeln!(s, "a-sweep = {}", join(&cfg.a_sweep));
    let _ = writeln!(s, "N = {}", cfg.nodes);
    let _ = writeln!(s, "grading = {}", cfg.grading);
    let _ = writeln!(s, "tol = {}", cfg.tol);
    let _ = writeln!(s, "out = {}", cfg.out.display());
    let _ = writeln!(s, "seed = {}", cfg.seed);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(pairs: &[(&'static str, &str)]) -> Vec<(&'static str, String)> {
        pairs.iter().map(|(k, v)| (*k, v.to_string())).collect()
    }

    #[test]
    fn construct_defaults_delta() {
        let cfg = parse_config(
            None,
            &flags(&[("command", "construct"), ("p", "-1"), ("q", "0.5"), ("eps", "0.4,0.2,0.1,0.05"), ("n", "2")]),
        )
        .unwrap();
        assert_eq!(cfg.params.delta, 0.75);
        assert_eq!((cfg.params.alpha, cfg.params.beta), (0.0, 0.0));
        assert_eq!(cfg.params.epsilon, 0.05);
    }

    #[test]
    fn admissibility_error_names_inequality() {
        let err = parse_config(None, &flags(&[("command", "construct"), ("q", "0.5"), ("p", "-0.4")])).unwrap_err();
        assert!(err.is_config());
        assert!(err.to_string().contains("p < q-1 violated"), "{err}");
        let err = parse_config(None, &flags(&[("command", "construct"), ("delta", "0.2")])).unwrap_err();
        assert!(err.to_string().contains("delta in (1-q, -p) violated"), "{err}");
    }

    #[test]
    fn flags_override_file() {
        let cfg = parse_config(Some("command = minkowski\nN = 1024\n"), &flags(&[("N", "2048")])).unwrap();
        assert_eq!(cfg.nodes, 2048);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_config(Some("command = construct\n\n# note\nbogus = 1\n"), &[]).unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 4, .. }), "{err}");
        let err = parse_config(Some("command = construct\nN = many\n"), &[]).unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 2, .. }), "{err}");
        let err = parse_config(Some("command construct\n"), &[]).unwrap_err();
        assert!(matches!(err, Error::ConfigParse { line: 1, .. }));
        assert!(parse_config(None, &flags(&[("nope", "1")])).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let cfg = parse_config(
            None,
            &flags(&[("command", "construct"), ("q", "2"), ("n", "3"), ("eps", "0.3,0.1,0.03,0.01"), ("tol", "1e-5")]),
        )
        .unwrap();
        let back = parse_config(Some(&to_config_text(&cfg)), &[]).unwrap();
        assert_eq!(back, cfg);
    }
}
