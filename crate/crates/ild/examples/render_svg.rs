//! Write the graph of the tent map's third iterate and a cobweb to stdout.
use ild::gallery;
use ild::numeric::rat;
use ild::svg::{render, RenderOptions};

fn main() {
    let opts = RenderOptions { iterate: 3, cobweb: Some((rat(1, 7), 12)), ..Default::default() };
    print!("{}", render(&gallery::tent(), &opts).unwrap());
}
