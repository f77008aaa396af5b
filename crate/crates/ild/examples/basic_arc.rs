//! Windows of the 0-basic arc through a point of the inverse limit.
use ild::gallery;
use ild::ilim::basic_arc;
use ild::mapspec::parse_orbit;

fn main() {
    let f = gallery::double_spiral_arc();
    let orbit = parse_orbit("1/2 | cycle: 1/2", &f).unwrap();
    let trace = basic_arc(&f, &orbit, 0, 8).unwrap();
    for w in &trace.windows {
        println!("k={} window {} reaches [{}, {}]", w.k, w.window, w.left_reach, w.right_reach);
    }
}
