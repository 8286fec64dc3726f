use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::traffic::{generate_workload, ip_cores, Injection, IpCore};
use super::{SimConfig, SimError, Switching, TrafficPattern};
use crate::routing::{route_trace, Destination, RoutingFunction};
use crate::topology::{ChannelId, NodeId, Topology};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStats {
    /// All packets created, warm-up included.
    pub packets_injected: u64,
    /// Packets created inside the measurement window.
    pub packets_measured: u64,
    pub packets_delivered: u64,
    pub flits_delivered: u64,
    pub avg_latency: f64,
    pub p99_latency: u64,
    pub max_latency: u64,
    /// Measured flits per cycle between the window start and the last measured delivery.
    pub throughput: f64,
    /// Cycle of the last measured delivery, never earlier than the warm-up end.
    pub total_transfer_time: u64,
    /// Flits still inside the network when the run stopped (warm-up stragglers).
    pub flits_in_flight: u64,
    pub end_cycle: u64,
}

/// Per-packet outcome of a run, in injection order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PacketRecord {
    pub created: u64,
    pub delivered: Option<u64>,
    pub hops: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimOutcome {
    pub stats: SimStats,
    pub packets: Vec<PacketRecord>,
}

struct Packet {
    created: u64,
    src: u32,
    route: Arc<[ChannelId]>,
    measured: bool,
    /// Flits sent over each hop of the route.
    sent: Vec<u32>,
    /// Flits that finished crossing each hop.
    arrived: Vec<u32>,
    /// Hops allocated so far; the next request is for `route[allocated]`.
    allocated: usize,
    waiting_since: Option<u64>,
    delivered: Option<u64>,
}

#[derive(Default, Clone)]
struct Channel {
    /// Packet and hop index currently holding the channel.
    owner: Option<(u32, usize)>,
    busy_until: u64,
    /// Flits stored in (or travelling to) the buffer at the channel's head.
    occupancy: u32,
    /// Packets with flits in that buffer, oldest first.
    queue: VecDeque<u32>,
}

/// Routes are shared between packets of the same router pair.
struct RouteCache<'a, R: ?Sized> {
    topology: &'a Topology,
    routing: &'a R,
    routes: HashMap<(NodeId, NodeId), Arc<[ChannelId]>>,
}

impl<R: RoutingFunction + ?Sized> RouteCache<'_, R> {
    fn get(&mut self, src: IpCore, dst: IpCore) -> Result<Arc<[ChannelId]>, SimError> {
        if let Some(r) = self.routes.get(&(src.router, dst.router)) {
            return Ok(r.clone());
        }
        let dest = Destination { node: dst.router, core: dst.core };
        let trace = route_trace(self.routing, self.topology, src.router, dest)?;
        let channels: Arc<[ChannelId]> = trace
            .path
            .windows(2)
            .map(|w| self.topology.channel(w[0], w[1]).expect("traced hops are links"))
            .collect();
        self.routes.insert((src.router, dst.router), channels.clone());
        Ok(channels)
    }
}

/// Runs a seeded synthetic workload.
pub fn simulate<R: RoutingFunction + ?Sized>(
    topology: &Topology,
    routing: &R,
    traffic: &TrafficPattern,
    config: &SimConfig,
) -> Result<SimStats, SimError> {
    config.validate()?;
    let workload = generate_workload(topology, traffic, config)?;
    Ok(simulate_workload(topology, routing, &workload, config)?.stats)
}

/// Runs an explicit injection list. Core indices refer to [`ip_cores`];
/// packets created in `[warmup, warmup + measure)` are measured.
pub fn simulate_workload<R: RoutingFunction + ?Sized>(
    topology: &Topology,
    routing: &R,
    workload: &[Injection],
    config: &SimConfig,
) -> Result<SimOutcome, SimError> {
    config.validate()?;
    let cores = ip_cores(topology);
    let mut order: Vec<usize> = (0..workload.len()).collect();
    order.sort_by_key(|&i| (workload[i].created, i));
    let mut cache = RouteCache { topology, routing, routes: HashMap::new() };
    let mut packets = Vec::with_capacity(workload.len());
    for inj in workload {
        let (src, dst) = match (cores.get(inj.src as usize), cores.get(inj.dst as usize)) {
            (Some(&s), Some(&d)) => (s, d),
            _ => return Err(SimError::ConfigInvalid(format!("injection references core {} or {}", inj.src, inj.dst))),
        };
        let route = cache.get(src, dst)?;
        let hops = route.len();
        packets.push(Packet {
            created: inj.created,
            src: inj.src,
            route,
            measured: (config.warmup..config.end_of_injection()).contains(&inj.created),
            sent: vec![0; hops],
            arrived: vec![0; hops],
            allocated: 0,
            waiting_since: None,
            delivered: None,
        });
    }
    let mut engine = Engine {
        config,
        flits: config.flits_per_packet,
        channels: vec![Channel::default(); topology.channel_count()],
        sources: vec![VecDeque::new(); cores.len()],
        arrivals: VecDeque::new(),
        packets,
        queued: 0,
        in_network: 0,
        injected_flits: 0,
        delivered_flits: 0,
    };
    let end = engine.run(&order)?;
    engine.finish(end)
}

struct Engine<'c> {
    config: &'c SimConfig,
    flits: u32,
    channels: Vec<Channel>,
    sources: Vec<VecDeque<u32>>,
    /// `(time, packet, hop)` in time order.
    arrivals: VecDeque<(u64, u32, usize)>,
    packets: Vec<Packet>,
    /// Packets in source queues that have not sent their last flit.
    queued: usize,
    /// Packets created but not yet delivered.
    in_network: usize,
    injected_flits: u64,
    delivered_flits: u64,
}

impl Engine<'_> {
    fn run(&mut self, order: &[usize]) -> Result<u64, SimError> {
        let mut outstanding = self.packets.iter().filter(|p| p.measured).count();
        let mut next = 0;
        let mut t = 0u64;
        loop {
            while let Some(&(at, pid, hop)) = self.arrivals.front() {
                if at != t {
                    break;
                }
                self.arrivals.pop_front();
                if self.arrive(pid, hop, t) && self.packets[pid as usize].measured {
                    outstanding -= 1;
                }
            }
            while next < order.len() && self.packets[order[next]].created == t {
                let pid = order[next] as u32;
                next += 1;
                if self.inject(pid, t) && self.packets[pid as usize].measured {
                    outstanding -= 1;
                }
            }
            if outstanding == 0 {
                return Ok(t);
            }
            if self.queued > self.config.max_backlog || t > self.config.max_cycles {
                return Err(SimError::SaturationAbort { cycle: t, backlog: self.queued });
            }
            self.allocate(t);
            let moved = self.transmit(t);
            if !moved && self.arrivals.is_empty() && self.in_network > 0 {
                return Err(SimError::Deadlock { cycle: t, stuck_packets: self.in_network });
            }
            t = if self.in_network == 0 && self.arrivals.is_empty() {
                match order.get(next) {
                    Some(&i) => self.packets[i].created,
                    None => return Err(SimError::Internal("measured packets remain but nothing is pending".into())),
                }
            } else {
                t + 1
            };
        }
    }

    /// Returns true if the packet was delivered on the spot (same router).
    fn inject(&mut self, pid: u32, t: u64) -> bool {
        let f = self.flits as u64;
        let p = &mut self.packets[pid as usize];
        self.injected_flits += f;
        if p.route.is_empty() {
            p.delivered = Some(t);
            self.delivered_flits += f;
            return true;
        }
        self.sources[p.src as usize].push_back(pid);
        self.queued += 1;
        self.in_network += 1;
        false
    }

    /// Returns true if this arrival completed the packet.
    fn arrive(&mut self, pid: u32, hop: usize, t: u64) -> bool {
        let p = &mut self.packets[pid as usize];
        p.arrived[hop] += 1;
        if hop + 1 < p.route.len() {
            return false;
        }
        // flits are consumed by the destination core on arrival
        self.channels[p.route[hop].index()].occupancy -= 1;
        self.delivered_flits += 1;
        if p.arrived[hop] == self.flits {
            p.delivered = Some(t);
            self.in_network -= 1;
            return true;
        }
        false
    }

    fn ready_for_next_hop(&self, p: &Packet, hop: usize) -> bool {
        match self.config.switching {
            Switching::StoreAndForward => p.arrived[hop] == self.flits,
            Switching::Wormhole => p.arrived[hop] >= 1,
        }
    }

    fn allocate(&mut self, t: u64) {
        let mut requests: Vec<(ChannelId, u64, u32, usize)> = Vec::new();
        for q in &self.sources {
            if let Some(&pid) = q.front() {
                if self.packets[pid as usize].allocated == 0 {
                    requests.push((self.packets[pid as usize].route[0], 0, pid, 0));
                }
            }
        }
        for (c, ch) in self.channels.iter().enumerate() {
            let Some(&pid) = ch.queue.front() else { continue };
            let p = &self.packets[pid as usize];
            let hop = p.allocated;
            // a wormhole packet can head an older buffer while queued behind another in its current one
            if hop >= 1 && hop < p.route.len() && p.route[hop - 1].index() == c && self.ready_for_next_hop(p, hop - 1) {
                requests.push((p.route[hop], 0, pid, hop));
            }
        }
        for r in requests.iter_mut() {
            let p = &mut self.packets[r.2 as usize];
            r.1 = *p.waiting_since.get_or_insert(t);
        }
        requests.sort_unstable();
        let mut last = None;
        for (ch, _, pid, hop) in requests {
            if last == Some(ch) {
                continue;
            }
            last = Some(ch);
            let c = &mut self.channels[ch.index()];
            if c.owner.is_none() {
                c.owner = Some((pid, hop));
                let p = &mut self.packets[pid as usize];
                p.allocated += 1;
                p.waiting_since = None;
            }
        }
    }

    /// Sends at most one flit per channel; repeats passes so that buffer
    /// space freed late in a pass is visible to earlier channels.
    fn transmit(&mut self, t: u64) -> bool {
        let mut moved = false;
        loop {
            let mut pass = false;
            for c in 0..self.channels.len() {
                pass |= self.try_send(c, t);
            }
            if !pass {
                return moved;
            }
            moved = true;
        }
    }

    fn try_send(&mut self, c: usize, t: u64) -> bool {
        let Some((pid, hop)) = self.channels[c].owner else { return false };
        let ch = &self.channels[c];
        if ch.busy_until > t || ch.occupancy >= self.config.buffer_depth {
            return false;
        }
        let f = self.flits;
        let p = &mut self.packets[pid as usize];
        let available = if hop == 0 { f - p.sent[0] } else { p.arrived[hop - 1] - p.sent[hop] };
        if available == 0 {
            return false;
        }
        p.sent[hop] += 1;
        let first = p.sent[hop] == 1;
        let last = p.sent[hop] == f;
        let route = p.route.clone();
        let has_next = hop + 1 < route.len();
        let src = p.src;

        let ch = &mut self.channels[c];
        ch.occupancy += 1;
        ch.busy_until = t + self.config.cycles_per_hop as u64;
        if first && has_next {
            ch.queue.push_back(pid);
        }
        if last {
            ch.owner = None;
        }
        self.arrivals.push_back((t + self.config.cycles_per_hop as u64, pid, hop));
        if hop > 0 {
            let up = &mut self.channels[route[hop - 1].index()];
            up.occupancy -= 1;
            if last {
                let front = up.queue.pop_front();
                debug_assert_eq!(front, Some(pid));
            }
        } else if last {
            let front = self.sources[src as usize].pop_front();
            debug_assert_eq!(front, Some(pid));
            self.queued -= 1;
        }
        true
    }

    fn finish(self, end: u64) -> Result<SimOutcome, SimError> {
        let f = self.flits as u64;
        let buffered: u64 = self.channels.iter().map(|c| c.occupancy as u64).sum();
        let waiting: u64 = self
            .packets
            .iter()
            .filter(|p| p.delivered.is_none() && !p.route.is_empty())
            .map(|p| f - p.sent[0] as u64)
            .sum();
        let created_flits: u64 = self.packets.iter().filter(|p| p.created <= end).count() as u64 * f;
        // every flit created is delivered, buffered/in transit, or still at its source
        if self.injected_flits != created_flits || self.injected_flits != self.delivered_flits + buffered + waiting {
            return Err(SimError::Conservation(format!(
                "injected {} flits, delivered {}, in network {}, at sources {}",
                self.injected_flits, self.delivered_flits, buffered, waiting
            )));
        }
        let mut latencies = Vec::new();
        let mut measured = 0u64;
        let mut last_delivery = None;
        for p in self.packets.iter().filter(|p| p.measured) {
            measured += 1;
            let d = p.delivered.ok_or_else(|| SimError::Internal("a measured packet was not delivered".into()))?;
            latencies.push(d - p.created);
            last_delivery = last_delivery.max(Some(d));
        }
        latencies.sort_unstable();
        let n = latencies.len();
        let avg_latency = if n == 0 { 0.0 } else { latencies.iter().sum::<u64>() as f64 / n as f64 };
        let p99_latency = if n == 0 { 0 } else { latencies[(n * 99).div_ceil(100) - 1] };
        let warmup = self.config.warmup;
        let flits_delivered = measured * f;
        let throughput = match last_delivery {
            Some(d) if d > warmup => flits_delivered as f64 / (d - warmup) as f64,
            _ => 0.0,
        };
        let stats = SimStats {
            packets_injected: self.packets.len() as u64,
            packets_measured: measured,
            packets_delivered: n as u64,
            flits_delivered,
            avg_latency,
            p99_latency,
            max_latency: latencies.last().copied().unwrap_or(0),
            throughput,
            total_transfer_time: last_delivery.unwrap_or(warmup).max(warmup),
            flits_in_flight: buffered + waiting,
            end_cycle: end,
        };
        let packets = self
            .packets
            .iter()
            .map(|p| PacketRecord { created: p.created, delivered: p.delivered, hops: p.route.len() as u32 })
            .collect();
        Ok(SimOutcome { stats, packets })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::{MotRouter, XyRouter};
    use crate::topology::{build_topology, BuildConfig, Family, Size};

    fn mesh(n: u32) -> Topology {
        build_topology(Family::Mesh, Size::square(n), &BuildConfig::default()).unwrap()
    }

    fn single(switching: Switching, flits: u32, cph: u32, src: u32, dst: u32) -> u64 {
        let t = mesh(4);
        let r = XyRouter::new(&t).unwrap();
        let cfg = SimConfig {
            flits_per_packet: flits,
            cycles_per_hop: cph,
            switching,
            warmup: 0,
            measure: 10,
            buffer_depth: flits.max(2),
            ..SimConfig::default()
        };
        let out = simulate_workload(&t, &r, &[Injection { created: 3, src, dst }], &cfg).unwrap();
        out.stats.max_latency
    }

    #[test]
    fn zero_load_store_and_forward() {
        // (0,0) -> (3,3) is 6 hops
        assert_eq!(single(Switching::StoreAndForward, 4, 1, 0, 15), 6 * 4);
        assert_eq!(single(Switching::StoreAndForward, 3, 2, 0, 15), 6 * 3 * 2);
        assert_eq!(single(Switching::StoreAndForward, 1, 1, 0, 1), 1);
    }

    #[test]
    fn zero_load_wormhole() {
        assert_eq!(single(Switching::Wormhole, 4, 1, 0, 15), 6 + 4 - 1);
        assert_eq!(single(Switching::Wormhole, 5, 3, 0, 15), (6 + 5 - 1) * 3);
        assert_eq!(single(Switching::Wormhole, 1, 1, 5, 6), 1);
    }

    #[test]
    fn local_packets_take_no_time() {
        let t = build_topology(Family::MoT, Size::square(2), &BuildConfig::default()).unwrap();
        let r = MotRouter::new(&t).unwrap();
        let cfg = SimConfig { warmup: 0, measure: 10, ..SimConfig::default() };
        // both cores of one leaf do not exist on a plain MoT; use one hop instead: leaf 0 -> leaf 1 is 2 hops
        let out = simulate_workload(&t, &r, &[Injection { created: 0, src: 0, dst: 1 }], &cfg).unwrap();
        assert_eq!(out.packets[0].hops, 2);
        assert_eq!(out.stats.max_latency, 2 * 4);
    }

    #[test]
    fn contention_serializes_a_shared_channel() {
        // two packets from (0,0) and (0,1) to (0,3) at the same time share (0,1)->(0,2)
        let t = mesh(4);
        let r = XyRouter::new(&t).unwrap();
        let cfg = SimConfig { warmup: 0, measure: 10, ..SimConfig::default() };
        let w = [Injection { created: 0, src: 0, dst: 3 }, Injection { created: 0, src: 1, dst: 3 }];
        let out = simulate_workload(&t, &r, &w, &cfg).unwrap();
        let lat: Vec<u64> = out.packets.iter().map(|p| p.delivered.unwrap() - p.created).collect();
        // packet 1 (2 hops) goes first at t=0; packet 0 reaches (0,1) at 4 and
        // finds the channel free again at 4, so it is not delayed
        assert_eq!(lat, vec![12, 8]);
        assert_eq!(out.stats.flits_in_flight, 0);
    }

    #[test]
    fn deterministic() {
        let t = mesh(4);
        let r = XyRouter::new(&t).unwrap();
        let cfg = SimConfig { injection: 5.0, ..SimConfig::default() };
        let a = simulate(&t, &r, &TrafficPattern::UniformRandom, &cfg).unwrap();
        let b = simulate(&t, &r, &TrafficPattern::UniformRandom, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.packets_delivered, a.packets_measured);
    }

    #[test]
    fn overload_aborts() {
        let t = mesh(4);
        let r = XyRouter::new(&t).unwrap();
        let cfg = SimConfig { injection: 100.0, max_backlog: 500, ..SimConfig::default() };
        let err = simulate(&t, &r, &TrafficPattern::UniformRandom, &cfg).unwrap_err();
        assert!(matches!(err, SimError::SaturationAbort { .. }), "{err:?}");
    }
}
