//! Parse a map document and an orbit, then write the canonical form back.
use ild::mapspec::{parse_map, parse_orbit};

const DOC: &str = "# a skew tent\nmap skew\npoint 0 0\npoint 1/3 1\npoint 1 0\n";

fn main() {
    let doc = parse_map(DOC).unwrap();
    let f = doc.map();
    print!("{}", doc.serialize());
    let orbit = parse_orbit("3/5 | cycle: 3/5", &f).unwrap();
    println!("orbit: {orbit}");
    println!("bad orbit: {}", parse_orbit("1/2, 1/3", &f).unwrap_err());
}
