use std::ffi::{CStr, CString};
use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};
use std::ptr;

use noc_topo_ffi::*;

fn build(family: &str, rows: u32, cols: u32) -> *mut NocTopology {
    let name = CString::new(family).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { noc_topology_build(name.as_ptr(), rows, cols, &mut t) }, NocStatus::Ok);
    t
}

fn last_error() -> String {
    let p = noc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn counts_and_diameter() {
    let t = build("d2dmot", 4, 4);
    let (mut routers, mut links, mut ips, mut d) = (0, 0, 0, 0);
    unsafe {
        assert_eq!(noc_topology_counts(t, &mut routers, &mut links, &mut ips), NocStatus::Ok);
        assert_eq!(noc_topology_diameter(t, &mut d), NocStatus::Ok);
        assert_eq!(noc_topology_counts(t, ptr::null_mut(), ptr::null_mut(), &mut ips), NocStatus::Ok);
        noc_topology_free(t);
    }
    assert_eq!((routers, ips, d), (40, 32, 8));
    assert!(links > 48);
}

#[test]
fn json_round_trip() {
    let t = build("mot", 4, 4);
    unsafe {
        let mut json = ptr::null_mut();
        assert_eq!(noc_topology_to_json(t, &mut json), NocStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(noc_topology_from_json(json, &mut back), NocStatus::Ok);
        let (mut a, mut b) = (0, 0);
        noc_topology_counts(t, &mut a, ptr::null_mut(), ptr::null_mut());
        noc_topology_counts(back, &mut b, ptr::null_mut(), ptr::null_mut());
        assert_eq!(a, b);
        noc_string_free(json);
        noc_topology_free(back);
        noc_topology_free(t);
    }
}

#[test]
fn routes() {
    let t = build("mot", 4, 4);
    let table_name = CString::new("table").unwrap();
    let (mut native, mut table) = (0, 0);
    unsafe {
        assert_eq!(noc_route_length(t, ptr::null(), 0, 15, &mut native), NocStatus::Ok);
        assert_eq!(noc_route_length(t, table_name.as_ptr(), 0, 15, &mut table), NocStatus::Ok);
        assert_eq!(noc_route_length(t, ptr::null(), 0, 999, &mut native), NocStatus::InvalidArgument);
        noc_topology_free(t);
    }
    assert_eq!((native, table), (8, 8));
}

#[test]
fn simulation_is_deterministic() {
    let t = build("mesh", 4, 4);
    let (mut a, mut b) = (NocSimStats::default(), NocSimStats::default());
    unsafe {
        assert_eq!(noc_simulate(t, ptr::null(), 2.0, 11, 4, true, &mut a), NocStatus::Ok);
        assert_eq!(noc_simulate(t, ptr::null(), 2.0, 11, 4, true, &mut b), NocStatus::Ok);
        assert_eq!(noc_simulate(t, ptr::null(), 150.0, 11, 4, true, &mut b), NocStatus::SimulationFailed);
        noc_topology_free(t);
    }
    assert!(a.packets_delivered > 0);
    assert_eq!(a, b);
}

#[test]
fn errors_carry_codes_and_messages() {
    let bad = CString::new("hypercube").unwrap();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(noc_topology_build(bad.as_ptr(), 4, 4, &mut t), NocStatus::InvalidArgument);
        assert!(last_error().contains("hypercube"));
        assert_eq!(noc_topology_build(ptr::null(), 4, 4, &mut t), NocStatus::NullPointer);
        let mot = CString::new("mot").unwrap();
        assert_eq!(noc_topology_build(mot.as_ptr(), 3, 3, &mut t), NocStatus::SizeUnsupported);
        let junk = CString::new("{").unwrap();
        assert_eq!(noc_topology_from_json(junk.as_ptr(), &mut t), NocStatus::InvalidTopology);
        assert_eq!(noc_topology_diameter(ptr::null(), ptr::null_mut()), NocStatus::NullPointer);
        noc_topology_free(ptr::null_mut());
        noc_string_free(ptr::null_mut());
    }
    assert!(t.is_null());
    let ok = build("mesh", 2, 2);
    assert!(noc_last_error_message().is_null());
    unsafe { noc_topology_free(ok) };
    let name = unsafe { CStr::from_ptr(noc_status_name(NocStatus::SizeUnsupported)) };
    assert_eq!(name.to_str().unwrap(), "size_unsupported");
}

#[test]
fn header_compiles_as_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let Ok(mut cc) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c", "-"])
        .arg(format!("-I{}", include.display()))
        .stdin(Stdio::piped())
        .spawn()
    else {
        eprintln!("no C compiler, skipping");
        return;
    };
    cc.stdin
        .take()
        .unwrap()
        .write_all(b"#include \"noc_topo.h\"\nint main(void) { NocTopology *t = 0; return (int)noc_topology_build(\"mesh\", 4, 4, &t); }\n")
        .unwrap();
    assert!(cc.wait().unwrap().success());
}
