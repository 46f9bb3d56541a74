//! Read a family file (or use a built-in tuple) and look for a sunflower.
//!
//!     cargo run --example detect -- path/to/families.txt

use sunflower_core::detect::find_multicolor_sunflower;
use sunflower_core::family::{parse_families, read_tuple};
use sunflower_core::FamilyTuple;

const DEMO: &str = "n=3
# three families on [3]
1
1,2
---
2
2,3
---
3
";

fn main() -> sunflower_core::Result<()> {
    let ft = match std::env::args().nth(1) {
        Some(path) => read_tuple(path.as_ref())?,
        None => FamilyTuple::new(parse_families(DEMO)?.1)?,
    };
    println!("sizes {:?}", ft.sizes());
    match find_multicolor_sunflower(&ft) {
        None => println!("sunflower-free"),
        Some(w) => println!("sunflower with core {}: {:?}", w.core, w.sets),
    }
    Ok(())
}
