use std::fs;
use std::path::Path;

use rand::SeedableRng;
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::dynamics::ChainState;
use crate::error::{Error, Result};
use crate::geometry::{Ball, Cuboid, Point};
use crate::model::{first_violation, BoundaryCondition, Configuration, ModelParams, StateClass};
use crate::rng::Stream;

pub const SNAPSHOT_FORMAT: &str = "hslab-snapshot/1";

/// A float written with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(S::Error::custom("non-finite number"));
        }
        RawValue::from_string(format!("{:.16e}", self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = f64::deserialize(d)?;
        if x.is_finite() {
            Ok(Num(x))
        } else {
            Err(D::Error::custom("non-finite number"))
        }
    }
}

fn nums(p: &Point) -> Vec<Num> {
    p.coords().iter().map(|&x| Num(x)).collect()
}

fn point(v: &[Num]) -> Point {
    Point::new(v.iter().map(|n| n.0))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BallDto {
    center: Vec<Num>,
    radius: Num,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TauDto {
    balls: Vec<BallDto>,
    shell: Option<Num>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RngDto {
    algorithm: String,
    /// Key as 64 hex digits.
    key: String,
    stream: u64,
    /// Decimal, since it may exceed 64 bits.
    word_pos: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotDto {
    format: String,
    state_class: StateClass,
    d: usize,
    lambda: Num,
    domain_low: Vec<Num>,
    domain_high: Vec<Num>,
    tau: TauDto,
    step: u64,
    seed: Option<u64>,
    centers: Vec<Vec<Num>>,
    rng: Option<RngDto>,
}

/// A configuration with its model, state class and optionally the chain's
/// step counter and stream position.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub params: ModelParams,
    pub config: Configuration,
    pub class: StateClass,
    pub step: u64,
    /// Seed the run was started from, if known.
    pub seed: Option<u64>,
    pub rng: Option<Stream>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn unhex(s: &str) -> Option<[u8; 32]> {
    if s.len() != 64 {
        return None;
    }
    let mut out = [0u8; 32];
    for (i, o) in out.iter_mut().enumerate() {
        *o = u8::from_str_radix(s.get(2 * i..2 * i + 2)?, 16).ok()?;
    }
    Some(out)
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Snapshot(msg.into())
}

impl Snapshot {
    pub fn new(params: ModelParams, config: Configuration, class: StateClass) -> Self {
        Snapshot {
            params,
            config,
            class,
            step: 0,
            seed: None,
            rng: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn from_chain(chain: &ChainState) -> Self {
        Snapshot {
            params: chain.params.clone(),
            config: chain.config.clone(),
            class: chain.class,
            step: chain.step,
            seed: None,
            rng: Some(chain.rng.clone()),
        }
    }

    /// Resumes the chain; `fallback` supplies a stream when none was saved.
    pub fn into_chain(self, fallback: Stream) -> Result<ChainState> {
        let step = self.step;
        let mut chain = ChainState::new(self.params, self.config, self.class, self.rng.unwrap_or(fallback))?;
        chain.step = step;
        Ok(chain)
    }

    /// Canonical JSON: centres sorted, floats with 17 significant digits.
    pub fn to_json(&self) -> Result<String> {
        let p = &self.params;
        let dto = SnapshotDto {
            format: SNAPSHOT_FORMAT.to_string(),
            state_class: self.class,
            d: p.d(),
            lambda: Num(p.lambda),
            domain_low: nums(p.domain.low()),
            domain_high: nums(p.domain.high()),
            tau: TauDto {
                balls: p
                    .tau
                    .balls
                    .iter()
                    .map(|b| BallDto {
                        center: nums(&b.center),
                        radius: Num(b.radius),
                    })
                    .collect(),
                shell: p.tau.shell.map(Num),
            },
            step: self.step,
            seed: self.seed,
            centers: self.config.sorted_points().iter().map(nums).collect(),
            rng: self.rng.as_ref().map(|r| RngDto {
                algorithm: "chacha8".to_string(),
                key: hex(&r.get_seed()),
                stream: r.get_stream(),
                word_pos: r.get_word_pos().to_string(),
            }),
        };
        let mut s = serde_json::to_string_pretty(&dto).map_err(|e| bad(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Parses and revalidates against the stored state class.
    pub fn from_json(text: &str) -> Result<Self> {
        let dto: SnapshotDto = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        if dto.format != SNAPSHOT_FORMAT {
            return Err(bad(format!("unknown format {:?}", dto.format)));
        }
        let check_dim = |v: &[Num], what: &str| {
            if v.len() == dto.d {
                Ok(())
            } else {
                Err(bad(format!("{what} has {} coordinates, expected {}", v.len(), dto.d)))
            }
        };
        check_dim(&dto.domain_low, "domain_low")?;
        check_dim(&dto.domain_high, "domain_high")?;
        let domain = Cuboid::new(point(&dto.domain_low), point(&dto.domain_high))?;
        let mut tau = BoundaryCondition::free();
        for b in &dto.tau.balls {
            check_dim(&b.center, "tau ball")?;
            tau.balls.push(Ball::new(point(&b.center), b.radius.0));
        }
        tau.shell = dto.tau.shell.map(|n| n.0);
        let params = ModelParams::new(dto.lambda.0, domain, tau)?;
        let mut config = Configuration::empty(&params);
        for c in &dto.centers {
            check_dim(c, "centre")?;
            config.insert(point(c));
        }
        if let Some(msg) = first_violation(&config, &params, dto.state_class) {
            return Err(bad(format!("invalid configuration: {msg}")));
        }
        let rng = match dto.rng {
            None => None,
            Some(r) => {
                if r.algorithm != "chacha8" {
                    return Err(bad(format!("unknown rng {:?}", r.algorithm)));
                }
                let key = unhex(&r.key).ok_or_else(|| bad("rng key must be 64 hex digits"))?;
                let pos: u128 = r.word_pos.parse().map_err(|_| bad("rng word_pos must be an integer"))?;
                let mut s = Stream::from_seed(key);
                s.set_stream(r.stream);
                s.set_word_pos(pos);
                Some(s)
            }
        };
        Ok(Snapshot {
            params,
            config,
            class: dto.state_class,
            step: dto.step,
            seed: dto.seed,
            rng,
        })
    }
}

pub fn write_snapshot(path: &Path, snapshot: &Snapshot) -> Result<()> {
    fs::write(path, snapshot.to_json()?)?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    Snapshot::from_json(&fs::read_to_string(path)?)
}
