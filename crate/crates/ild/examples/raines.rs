//! Preimage components compared against their images.
use ild::certify::raines_property_probe;
use ild::gallery;

fn main() {
    for e in gallery::gallery() {
        println!("{:<24} {}", e.name, raines_property_probe(&e.map, 16).status());
    }
}
