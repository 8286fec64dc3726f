//! C ABI over `noc-topo`.
//!
//! Topologies are opaque handles created by `noc_topology_build` or
//! `noc_topology_from_json` and released with `noc_topology_free`. Every
//! fallible call returns a [`NocStatus`]; on failure the message is available
//! from `noc_last_error_message` on the same thread until the next call.
//! Strings returned by the library are freed with `noc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use noc_topo::analysis::all_pairs_metrics;
use noc_topo::routing::{route_trace, router_for, Destination, RoutingKind};
use noc_topo::sim::{simulate, SimConfig, Switching, TrafficPattern};
use noc_topo::topology::{build_topology, BuildConfig, Family, NodeId, Size, Topology};
use noc_topo::Error;

/// Result of every fallible call. `NOC_STATUS_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NocStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidTopology = 3,
    SizeUnsupported = 4,
    RoutingFailed = 5,
    Unreachable = 6,
    SimulationFailed = 7,
    Panic = 8,
}

/// Opaque topology handle.
pub struct NocTopology {
    inner: Topology,
}

/// Results of `noc_simulate`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NocSimStats {
    pub packets_delivered: u64,
    pub avg_latency: f64,
    pub p99_latency: u64,
    pub throughput: f64,
    pub total_transfer_time: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NocStatus {
    match e.code() {
        "SizeUnsupported" => NocStatus::SizeUnsupported,
        "Unreachable" | "Disconnected" => NocStatus::Unreachable,
        "AddressMismatch" | "RoutingIncomplete" | "LivelockDetected" | "InvalidHop" | "UnsupportedTopology" => {
            NocStatus::RoutingFailed
        }
        "ConfigInvalid" | "SaturationAbort" | "Deadlock" | "Conservation" | "Internal" => NocStatus::SimulationFailed,
        _ => NocStatus::InvalidTopology,
    }
}

struct Failure(NocStatus, String);

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e = e.into();
        Failure(status_of(&e), e.to_string())
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(NocStatus::InvalidArgument, message.into())
}

/// Runs `body`, records any failure and converts panics into `NOC_STATUS_PANIC`.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> NocStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => NocStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("panic inside noc-topo");
            NocStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(NocStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(t: *const NocTopology) -> Result<&'a Topology, Failure> {
    t.as_ref().map(|t| &t.inner).ok_or_else(|| Failure(NocStatus::NullPointer, "topology handle is null".into()))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(NocStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

/// Builds a topology. `family` is a name such as `"mesh"` or `"d2dmot"`; a
/// binary tree takes its `N` in `rows`.
///
/// # Safety
/// `family` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noc_topology_build(
    family: *const c_char,
    rows: u32,
    cols: u32,
    out: *mut *mut NocTopology,
) -> NocStatus {
    guard(|| {
        let name = text(family, "family")?;
        let family = Family::parse(name).ok_or_else(|| invalid(format!("unknown family {name:?}")))?;
        let t = build_topology(family, Size::new(rows, cols), &BuildConfig::default())?;
        write(out, Box::into_raw(Box::new(NocTopology { inner: t })))
    })
}

/// Loads a topology from the JSON written by `noc_topology_to_json`.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noc_topology_from_json(json: *const c_char, out: *mut *mut NocTopology) -> NocStatus {
    guard(|| {
        let t = Topology::from_json(text(json, "json")?)?;
        write(out, Box::into_raw(Box::new(NocTopology { inner: t })))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `topology` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn noc_topology_free(topology: *mut NocTopology) {
    if !topology.is_null() {
        drop(Box::from_raw(topology));
    }
}

/// Router, link and IP core counts. Any output pointer may be null.
///
/// # Safety
/// `topology` must be a live handle; non-null outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn noc_topology_counts(
    topology: *const NocTopology,
    routers: *mut u32,
    links: *mut u32,
    ips: *mut u32,
) -> NocStatus {
    guard(|| {
        let t = handle(topology)?;
        for (out, v) in [(routers, t.node_count() as u32), (links, t.link_count() as u32), (ips, t.ip_count())] {
            if !out.is_null() {
                out.write(v);
            }
        }
        Ok(())
    })
}

/// Largest shortest-path distance between any two routers.
///
/// # Safety
/// `topology` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noc_topology_diameter(topology: *const NocTopology, out: *mut u32) -> NocStatus {
    guard(|| {
        let t = handle(topology)?;
        write(out, all_pairs_metrics(t)?.diameter)
    })
}

/// Serializes to JSON; free the result with `noc_string_free`.
///
/// # Safety
/// `topology` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noc_topology_to_json(topology: *const NocTopology, out: *mut *mut c_char) -> NocStatus {
    guard(|| {
        let json = handle(topology)?.to_json();
        let c = CString::new(json).map_err(|_| invalid("json contains a nul byte"))?;
        write(out, c.into_raw())
    })
}

/// Hop count of the route from router `src` to router `dst`. `routing` is
/// `"xy"`, `"extxy"`, `"mot"`, `"d2dmot"`, `"table"`, or null for the
/// family's own algorithm.
///
/// # Safety
/// `topology` must be a live handle, `routing` null or a valid C string,
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noc_route_length(
    topology: *const NocTopology,
    routing: *const c_char,
    src: u32,
    dst: u32,
    out: *mut u32,
) -> NocStatus {
    guard(|| {
        let t = handle(topology)?;
        let kind = routing_kind(routing, t.family())?;
        let n = t.node_count() as u32;
        if src >= n || dst >= n {
            return Err(invalid(format!("router ids must be below {n}")));
        }
        let r = router_for(kind, t)?;
        let path = route_trace(&r, t, NodeId(src), Destination::router(NodeId(dst)))?;
        write(out, path.distance)
    })
}

/// Uniform random traffic with the default warm-up and measurement windows.
///
/// # Safety
/// `topology` must be a live handle, `routing` null or a valid C string,
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noc_simulate(
    topology: *const NocTopology,
    routing: *const c_char,
    injection: f64,
    seed: u64,
    flits_per_packet: u32,
    wormhole: bool,
    out: *mut NocSimStats,
) -> NocStatus {
    guard(|| {
        let t = handle(topology)?;
        let kind = routing_kind(routing, t.family())?;
        let r = router_for(kind, t)?;
        let switching = if wormhole { Switching::Wormhole } else { Switching::StoreAndForward };
        let config = SimConfig {
            injection,
            seed,
            flits_per_packet,
            buffer_depth: flits_per_packet.max(SimConfig::default().buffer_depth),
            switching,
            ..SimConfig::default()
        };
        let s = simulate(t, &r, &TrafficPattern::UniformRandom, &config)?;
        write(
            out,
            NocSimStats {
                packets_delivered: s.packets_delivered,
                avg_latency: s.avg_latency,
                p99_latency: s.p99_latency,
                throughput: s.throughput,
                total_transfer_time: s.total_transfer_time,
            },
        )
    })
}

unsafe fn routing_kind(routing: *const c_char, family: Family) -> Result<RoutingKind, Failure> {
    if routing.is_null() {
        return Ok(RoutingKind::native(family));
    }
    let name = text(routing, "routing")?;
    RoutingKind::parse(name).ok_or_else(|| invalid(format!("unknown routing {name:?}")))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library.
#[no_mangle]
pub extern "C" fn noc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn noc_status_name(status: NocStatus) -> *const c_char {
    let name: &'static CStr = match status {
        NocStatus::Ok => c"ok",
        NocStatus::NullPointer => c"null_pointer",
        NocStatus::InvalidArgument => c"invalid_argument",
        NocStatus::InvalidTopology => c"invalid_topology",
        NocStatus::SizeUnsupported => c"size_unsupported",
        NocStatus::RoutingFailed => c"routing_failed",
        NocStatus::Unreachable => c"unreachable",
        NocStatus::SimulationFailed => c"simulation_failed",
        NocStatus::Panic => c"panic",
    };
    name.as_ptr()
}

/// Frees a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn noc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
