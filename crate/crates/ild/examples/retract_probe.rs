//! Look for a backward orbit in omega(C) carrying an infinite monotone pull-back.
use ild::asymptotics::{omega_approx, retract_probe, DEFAULT_TRANSIENT};
use ild::gallery;
use ild::numeric::zero;

fn main() {
    for name in ["tent", "period-two", "double-spiral-arc", "knaster-triple"] {
        let f = gallery::entry(name).unwrap().map;
        let omega = omega_approx(&f, DEFAULT_TRANSIENT, 256, &zero());
        let v = retract_probe(&f, &omega, 16, 16);
        println!("{name}: {}", v.status());
        if let Some(c) = v.proven() {
            println!("  orbit {} with delta {}", c.orbit, c.delta);
        }
    }
}
