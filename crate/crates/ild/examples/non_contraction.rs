//! Intervals leaving a neighbourhood of C must double before they come back.
use ild::asymptotics::non_contraction_check;
use ild::gallery;
use ild::numeric::rat;

fn main() {
    for name in ["tent", "minc", "two-sided-spiral"] {
        let f = gallery::entry(name).unwrap().map;
        let v = non_contraction_check(&f, &rat(1, 64));
        match v.refuted() {
            Some(w) => println!("{name}: refuted, {} shrinks to {} after {} steps", w.j, w.image, w.steps),
            None => println!("{name}: {}", v.status()),
        }
    }
}
