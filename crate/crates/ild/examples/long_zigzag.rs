//! Lower bound on zigzag length for Minc's map.
use ild::certify::long_zigzag_certify;
use ild::gallery;

fn main() {
    let f = gallery::minc();
    match long_zigzag_certify(&f, 64).proven() {
        Some(cert) => {
            println!("every zigzag has image length >= {}", cert.epsilon);
            println!("{} branch bounds", cert.per_branch.len());
        }
        None => println!("no bound found"),
    }
}
