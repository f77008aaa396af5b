//! Omega-limit set of the critical points, exact when every critical orbit is eventually periodic or trapped.
use ild::asymptotics::{omega_approx, DEFAULT_TRANSIENT};
use ild::gallery;
use ild::numeric::zero;

fn main() {
    for name in ["tent", "two-sided-spiral", "knaster-triple", "spiral-leo"] {
        let f = gallery::entry(name).unwrap().map;
        let o = omega_approx(&f, DEFAULT_TRANSIENT, 256, &zero());
        let kind = if o.exact_flag { "exact" } else { "outer cover" };
        println!("{name}: {kind}, {} parts, meets C: {:?}", o.cover.parts().len(), o.meets_critical(&f));
    }
}
