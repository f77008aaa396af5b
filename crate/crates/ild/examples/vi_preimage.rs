//! A virtually increasing preimage of a target interval.
use ild::gallery;
use ild::ilim::{check_vi, virtually_increasing_preimage};
use ild::numeric::{rat, RatInterval};

fn main() {
    let f = gallery::tent();
    let target = RatInterval::new(rat(1, 5), rat(3, 5));
    let v = virtually_increasing_preimage(&f, &target);
    println!("{} maps onto {} (route {})", v.result, v.target, v.route);
    check_vi(&f, &v).unwrap();
}
