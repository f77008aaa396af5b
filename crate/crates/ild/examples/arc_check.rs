//! Decide whether the inverse limit is an arc.
use ild::gallery;
use ild::ilim::arc_check;

fn main() {
    for name in ["double-spiral-arc", "two-sided-spiral", "knaster-triple"] {
        let f = gallery::entry(name).unwrap().map;
        let d = arc_check(&f, 16);
        match (d.verdict.proven(), d.verdict.refuted()) {
            (Some(c), _) => println!("{name}: arc with end base points {:?}", c.ends.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            (_, Some(w)) => println!("{name}: not an arc, {} is fixed by f^{} but not by f^2", w.point, 2 * w.m),
            _ => println!("{name}: unknown"),
        }
    }
}
