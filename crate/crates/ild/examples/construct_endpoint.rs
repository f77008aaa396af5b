//! Build an endpoint from a recurrent critical point and check it.
use ild::gallery;
use ild::ilim::{b_endpoint_test, endpoint_construct};
use ild::numeric::half;

fn main() {
    let f = gallery::period_two();
    let e = endpoint_construct(&f, &half(), 16).expect("1/2 is periodic");
    println!("orbit {}", e.orbit);
    println!("b-endpoint: {}", b_endpoint_test(&f, &e.orbit, 32).status());
    if let Err(err) = endpoint_construct(&gallery::tent(), &half(), 16) {
        println!("tent: {err}");
    }
}
