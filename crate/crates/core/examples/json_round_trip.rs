//! Saves a model to JSON, reads it back and compares Weyl functions.

use boundary_triples::models::{elliptic_2d, load_model, save_model, Grid2D};
use boundary_triples::numcore::norm;
use boundary_triples::triple::gamma;
use boundary_triples::{c64, Result};

fn main() -> Result<()> {
    let model = elliptic_2d(&Grid2D::unit_square(5, 5).with_convection(|x, _| x, |_, y| 1.0 - y))?;
    let path = std::env::temp_dir().join(format!("btriple-example-{}.json", std::process::id()));
    save_model(&model, &path)?;
    let back = load_model(&path)?;
    println!("{} bytes at {}", std::fs::metadata(&path)?.len(), path.display());
    std::fs::remove_file(&path)?;

    let z = c64(1.5, 0.5);
    let (a, b) = (gamma(&model, z)?.weyl, gamma(&back, z)?.weyl);
    println!("kind {} -> {}, Weyl difference {:.1e}", model.kind(), back.kind(), norm(&(&a - &b)));
    Ok(())
}
