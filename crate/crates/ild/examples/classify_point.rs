//! Folding, B-endpoint, endpoint and double-spiral verdicts for a few points.
use ild::gallery;
use ild::ilim::endpoint_classify;
use ild::mapspec::parse_orbit;

fn main() {
    for (name, text) in [("tent", "0 | cycle: 0"), ("tent", "2/3 | cycle: 2/3"), ("double-spiral-arc", "1/2 | cycle: 1/2")] {
        let f = gallery::entry(name).unwrap().map;
        let orbit = parse_orbit(text, &f).unwrap();
        let pc = endpoint_classify(&f, &orbit, 32);
        println!(
            "{name} ({text}): folding {}, b-endpoint {}, endpoint {}, double spiral {}",
            pc.folding.status(),
            pc.b_endpoint.status(),
            pc.endpoint.status(),
            pc.double_spiral.status()
        );
    }
}
