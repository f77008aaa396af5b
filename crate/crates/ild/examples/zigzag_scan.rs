//! Scan the tent map and Minc's map for zigzags.
use ild::certify::zigzag_scan;
use ild::gallery;
use ild::plmap::DEFAULT_LAP_BUDGET;

fn main() {
    for name in ["tent", "minc"] {
        let f = gallery::entry(name).unwrap().map;
        match zigzag_scan(&f, 4, DEFAULT_LAP_BUDGET) {
            ild::verdict::Verdict::Refuted { witness } => {
                println!("{name}: zigzag [{}, {}] of f^{} with image {}", witness.a, witness.b, witness.n, witness.image)
            }
            v => println!("{name}: {}", serde_json::to_string(&v).unwrap()),
        }
    }
}
