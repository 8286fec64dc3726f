use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{SimConfig, SimError};
use crate::topology::{NodeId, Topology};

/// One IP core: the router it hangs off and its index among that router's cores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IpCore {
    pub router: NodeId,
    pub core: u8,
}

/// Every IP core of `topology`, ordered by router then core index.
pub fn ip_cores(topology: &Topology) -> Vec<IpCore> {
    topology
        .ips()
        .iter()
        .flat_map(|(&router, &count)| (0..count).map(move |core| IpCore { router, core: core as u8 }))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrafficPattern {
    UniformRandom,
    /// Core `i` of a `s x s` arrangement (`s = floor(sqrt(K))`) sends to the
    /// mirrored core; cores on the diagonal or outside the square stay silent.
    Transpose,
    /// With probability `weight` a packet goes to a core of `node`, otherwise uniform.
    Hotspot { node: NodeId, weight: f64 },
}

impl TrafficPattern {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "uniform" | "uniform_random" => Some(TrafficPattern::UniformRandom),
            "transpose" => Some(TrafficPattern::Transpose),
            _ => {
                // hotspot:<node>:<weight>
                let rest = s.strip_prefix("hotspot:")?;
                let (node, weight) = rest.split_once(':')?;
                let weight: f64 = weight.parse().ok()?;
                (0.0..=1.0).contains(&weight).then_some(())?;
                Some(TrafficPattern::Hotspot { node: NodeId(node.parse().ok()?), weight })
            }
        }
    }
}

/// A packet to inject: creation cycle and source/destination core indices
/// into [`ip_cores`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Injection {
    pub created: u64,
    pub src: u32,
    pub dst: u32,
}

fn uniform_other(rng: &mut ChaCha8Rng, k: u32, src: u32) -> u32 {
    let d = rng.random_range(0..k - 1);
    if d >= src {
        d + 1
    } else {
        d
    }
}

/// Seeded injection schedule over `[0, warmup + measure)`: every cycle each
/// core independently creates a packet with probability `injection / 100`.
pub fn generate_workload(
    topology: &Topology,
    traffic: &TrafficPattern,
    config: &SimConfig,
) -> Result<Vec<Injection>, SimError> {
    let cores = ip_cores(topology);
    let k = cores.len() as u32;
    if k < 2 {
        return Err(SimError::ConfigInvalid("traffic needs at least two IP cores".into()));
    }
    let hot: Vec<u32> = match traffic {
        TrafficPattern::Hotspot { node, .. } => {
            let hot: Vec<u32> = (0..k).filter(|&i| cores[i as usize].router == *node).collect();
            if hot.is_empty() {
                return Err(SimError::ConfigInvalid(format!("hotspot router {node} has no IP cores")));
            }
            hot
        }
        _ => Vec::new(),
    };
    let side = (k as f64).sqrt().floor() as u32;
    let p = config.injection_probability();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::new();
    for cycle in 0..config.end_of_injection() {
        for src in 0..k {
            if !rng.random_bool(p) {
                continue;
            }
            let dst = match *traffic {
                TrafficPattern::UniformRandom => uniform_other(&mut rng, k, src),
                TrafficPattern::Transpose => {
                    if src >= side * side {
                        continue;
                    }
                    let t = (src % side) * side + src / side;
                    if t == src {
                        continue;
                    }
                    t
                }
                TrafficPattern::Hotspot { weight, .. } => {
                    let pick = hot[rng.random_range(0..hot.len())];
                    if rng.random_bool(weight) && pick != src {
                        pick
                    } else {
                        uniform_other(&mut rng, k, src)
                    }
                }
            };
            out.push(Injection { created: cycle, src, dst });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{build_topology, BuildConfig, Family, Size};

    fn mesh() -> Topology {
        build_topology(Family::Mesh, Size::square(4), &BuildConfig::default()).unwrap()
    }

    #[test]
    fn cores_of_d2d_mot() {
        let t = build_topology(Family::D2DMoT, Size::square(4), &BuildConfig::default()).unwrap();
        let cores = ip_cores(&t);
        assert_eq!(cores.len(), 32);
        assert_eq!(cores[1], IpCore { router: NodeId(0), core: 1 });
    }

    #[test]
    fn uniform_never_self_and_seeded() {
        let t = mesh();
        let cfg = SimConfig { injection: 20.0, ..SimConfig::default() };
        let a = generate_workload(&t, &TrafficPattern::UniformRandom, &cfg).unwrap();
        let b = generate_workload(&t, &TrafficPattern::UniformRandom, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|i| i.src != i.dst && i.dst < 16));
        // 16 cores x 1200 cycles x 0.2
        assert!((3400..4300).contains(&a.len()), "{}", a.len());
        let c = generate_workload(&t, &TrafficPattern::UniformRandom, &SimConfig { seed: 2, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn transpose_mirrors() {
        let t = mesh();
        let cfg = SimConfig { injection: 50.0, ..SimConfig::default() };
        let w = generate_workload(&t, &TrafficPattern::Transpose, &cfg).unwrap();
        assert!(w.iter().all(|i| i.dst == (i.src % 4) * 4 + i.src / 4 && i.src != i.dst));
    }

    #[test]
    fn parse_patterns() {
        assert_eq!(TrafficPattern::parse("uniform"), Some(TrafficPattern::UniformRandom));
        assert_eq!(
            TrafficPattern::parse("hotspot:5:0.25"),
            Some(TrafficPattern::Hotspot { node: NodeId(5), weight: 0.25 })
        );
        assert_eq!(TrafficPattern::parse("hotspot:5:2"), None);
        assert_eq!(TrafficPattern::parse("bogus"), None);
    }

    #[test]
    fn zero_injection_is_empty() {
        let cfg = SimConfig { injection: 0.0, ..SimConfig::default() };
        assert!(generate_workload(&mesh(), &TrafficPattern::UniformRandom, &cfg).unwrap().is_empty());
    }
}
