use serde::{Deserialize, Serialize};

use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Switching {
    /// A packet moves on only after all of its flits reached the router.
    #[default]
    StoreAndForward,
    /// The header flit moves on as soon as it arrives; the body follows in a pipeline.
    Wormhole,
}

impl Switching {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "saf" | "store_and_forward" | "store-and-forward" => Some(Switching::StoreAndForward),
            "wormhole" | "wh" => Some(Switching::Wormhole),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Switching::StoreAndForward => "store_and_forward",
            Switching::Wormhole => "wormhole",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub flits_per_packet: u32,
    pub cycles_per_hop: u32,
    /// Packets per IP core per 100 cycles.
    pub injection: f64,
    pub warmup: u64,
    pub measure: u64,
    pub seed: u64,
    pub switching: Switching,
    /// Flits each input channel can hold.
    pub buffer_depth: u32,
    /// Packets waiting in source queues beyond which the run aborts.
    pub max_backlog: usize,
    /// Cycle after which the run aborts if measured packets are still undelivered.
    pub max_cycles: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            flits_per_packet: 4,
            cycles_per_hop: 1,
            injection: 1.0,
            warmup: 200,
            measure: 1000,
            seed: 1,
            switching: Switching::StoreAndForward,
            buffer_depth: 8,
            max_backlog: 100_000,
            max_cycles: 1_000_000,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::ConfigInvalid(m.to_string()));
        if self.flits_per_packet == 0 || self.cycles_per_hop == 0 || self.buffer_depth == 0 {
            return bad("flits_per_packet, cycles_per_hop and buffer_depth must be at least 1");
        }
        if self.measure == 0 {
            return bad("the measurement window must be at least 1 cycle");
        }
        if !(0.0..=100.0).contains(&self.injection) || self.injection.is_nan() {
            return bad("injection must be between 0 and 100 packets per 100 cycles");
        }
        if self.switching == Switching::StoreAndForward && self.buffer_depth < self.flits_per_packet {
            return bad("store-and-forward needs buffer_depth >= flits_per_packet");
        }
        Ok(())
    }

    /// Bernoulli injection probability per IP per cycle.
    pub fn injection_probability(&self) -> f64 {
        self.injection / 100.0
    }

    pub fn end_of_injection(&self) -> u64 {
        self.warmup + self.measure
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SimConfig::default().validate().is_ok());
        let c = SimConfig { buffer_depth: 2, ..SimConfig::default() };
        assert!(c.validate().is_err());
        let c = SimConfig { buffer_depth: 2, switching: Switching::Wormhole, ..SimConfig::default() };
        assert!(c.validate().is_ok());
        assert!(SimConfig { flits_per_packet: 0, ..SimConfig::default() }.validate().is_err());
        assert!(SimConfig { injection: 120.0, ..SimConfig::default() }.validate().is_err());
        assert!(SimConfig { injection: 0.0, ..SimConfig::default() }.validate().is_ok());
    }
}
