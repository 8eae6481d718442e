use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use hslab_core::{BoundaryCondition, Cuboid, ModelParams, Point};

use crate::args::{FileConfig, ModelArgs};

pub type CliResult<T> = Result<T, String>;

pub fn load_file(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {}", path.display(), one_line(&e.to_string())))
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Command-line values over file values; unknown file keys are errors.
pub fn merge<T: Serialize + DeserializeOwned>(cli: &T, table: Option<&toml::Value>, section: &str) -> CliResult<T> {
    let mut base = match table {
        None => Value::Object(Default::default()),
        Some(t) => {
            let from_file: T = t
                .clone()
                .try_into()
                .map_err(|e: toml::de::Error| format!("[{section}]: {}", one_line(&e.to_string())))?;
            serde_json::to_value(from_file).map_err(|e| e.to_string())?
        }
    };
    let overlay = serde_json::to_value(cli).map_err(|e| e.to_string())?;
    if let (Value::Object(b), Value::Object(o)) = (&mut base, overlay) {
        b.extend(o);
    }
    serde_json::from_value(base).map_err(|e| format!("[{section}]: {e}"))
}

/// `x1,..,xd:radius`.
pub fn parse_ball(text: &str, d: usize) -> CliResult<(Point, f64)> {
    let bad = || format!("ball `{text}`: expected x1,..,x{d}:radius");
    let (c, r) = text.split_once(':').ok_or_else(bad)?;
    let coords = c
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    let radius: f64 = r.trim().parse().map_err(|_| bad())?;
    if coords.len() != d {
        return Err(bad());
    }
    Ok((Point::new(coords), radius))
}

pub fn domain(d: usize, sides: &[f64]) -> CliResult<Cuboid> {
    let sides = match sides.len() {
        1 => vec![sides[0]; d],
        k if k == d => sides.to_vec(),
        k => return Err(format!("{k} box sides given for dimension {d}")),
    };
    Cuboid::with_sides(&sides).map_err(|e| e.to_string())
}

pub fn tau(d: usize, balls: &[String], shell: Option<f64>) -> CliResult<BoundaryCondition> {
    let mut tau = BoundaryCondition::free();
    for b in balls {
        let (c, r) = parse_ball(b, d)?;
        tau = tau.with_ball(c, r);
    }
    if let Some(w) = shell {
        tau = tau.with_shell(w);
    }
    Ok(tau)
}

impl ModelArgs {
    pub fn dimension(&self) -> usize {
        self.d.unwrap_or(2)
    }

    pub fn params(&self, default_sides: &[f64], default_lambda: f64) -> CliResult<ModelParams> {
        let d = self.dimension();
        let sides = self.sides.clone().unwrap_or_else(|| default_sides.to_vec());
        let lambda = self.lambda.unwrap_or(default_lambda);
        let tau = tau(d, self.tau_ball.as_deref().unwrap_or(&[]), self.shell)?;
        ModelParams::new(lambda, domain(d, &sides)?, tau).map_err(|e| e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::ContractionArgs;

    #[test]
    fn flags_override_file() {
        let table: toml::Value = toml::from_str("d = 3\ngamma = 0.25\ntrials = 50").unwrap();
        let cli = ContractionArgs {
            gamma: Some(0.75),
            ..Default::default()
        };
        let m = merge(&cli, Some(&table), "contraction").unwrap();
        assert_eq!((m.d, m.gamma, m.trials), (Some(3), Some(0.75), Some(50)));
    }

    #[test]
    fn unknown_file_key_is_an_error() {
        let table: toml::Value = toml::from_str("gama = 0.25").unwrap();
        let err = merge(&ContractionArgs::default(), Some(&table), "contraction").unwrap_err();
        assert!(err.contains("unknown field `gama`"), "{err}");
        assert!(!err.contains('\n'));
    }

    #[test]
    fn balls_parse() {
        let (c, r) = parse_ball("1, 6:0.9", 2).unwrap();
        assert_eq!((c.coords(), r), (&[1.0, 6.0][..], 0.9));
        assert!(parse_ball("1:0.9", 2).is_err());
        assert!(parse_ball("1,2", 2).is_err());
    }

    #[test]
    fn single_side_means_cube() {
        assert_eq!(domain(3, &[2.0]).unwrap().sides(), vec![2.0; 3]);
        assert!(domain(3, &[2.0, 1.0]).is_err());
    }
}
