//! Closed-form areas of the odd Reuleaux polygons, increasing towards the disk.
//!
//! `cargo run --example area_table`

use std::f64::consts::PI;

use orbiform::reuleaux::{area_table, is_strictly_increasing, table_csv};

fn main() -> orbiform::Result<()> {
    let table = area_table(21, 1.0)?;
    print!("{}", table_csv(&table));
    println!("# strictly increasing: {}", is_strictly_increasing(&table));
    println!("# disk: {PI:.16}/4 = {:.16}", PI / 4.0);
    Ok(())
}
