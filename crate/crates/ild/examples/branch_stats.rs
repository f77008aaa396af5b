//! Distances r_n and R_n from iterates of a critical point to the ends of their monotone lap image.
use ild::asymptotics::rn_limit_classifier;
use ild::gallery;
use ild::numeric::rat;

fn main() {
    let f = gallery::tent();
    for c in rn_limit_classifier(&f, 12, &rat(1, 1000)) {
        println!("c = {}: r -> 0 {}, R -> 0 {}", c.c, c.r_to_zero.status(), c.big_r_to_zero.status());
        if let Some(s) = &c.series {
            for b in s.stats.iter().take(4) {
                println!("  n={} M={} r={} R={}", b.n, b.m, b.r, b.big_r);
            }
        }
    }
}
