//! Locally-eventually-onto: a Markov certificate for the tent map, an invariant interval for the Knaster triple.
use ild::certify::leo_certify;
use ild::gallery;

fn main() {
    for name in ["tent", "knaster-triple"] {
        let f = gallery::entry(name).unwrap().map;
        println!("{name}: {}", serde_json::to_string(&leo_certify(&f, 64)).unwrap());
    }
}
