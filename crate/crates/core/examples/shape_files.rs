//! Reading and writing shape JSON, and rendering a boundary as SVG.
//!
//! `cargo run --example shape_files`

use orbiform::body::{validate, ValidationOptions};
use orbiform::cli::render_svg;
use orbiform::reuleaux::{to_body, ReuleauxSpec};
use orbiform::shape::{body_from_json, body_to_json, read_shape, write_atomic, write_shape};

fn main() -> orbiform::Result<()> {
    let text = r#"{ "dim": 2, "width": 1.0, "coeffs": [
        { "degree": 5, "part": "sin", "value": 0.004 },
        { "degree": 0, "part": "cos", "value": 0.5 } ] }"#;
    let body = body_from_json(text)?;
    print!("{}", body_to_json(&body));
    println!("valid: {}", validate(&body, &ValidationOptions::default())?.is_valid());

    let dir = std::env::temp_dir();
    let json = dir.join("orbiform-pentagon.json");
    let svg = dir.join("orbiform-pentagon.svg");
    let pentagon = to_body(&ReuleauxSpec::new(5, 1.0)?, 256)?;
    write_shape(&json, &pentagon)?;
    write_atomic(&svg, render_svg(&pentagon).as_bytes())?;
    let back = read_shape(&json)?;
    println!("wrote {} (band limit {}) and {}", json.display(), back.max_degree(), svg.display());
    Ok(())
}
