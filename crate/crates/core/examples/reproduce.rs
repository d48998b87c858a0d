// Recomputes a published table and lists each cell against its printed value.

use polysmooth::cli::{reproduce_table, ReproduceOptions};

pub fn run() -> polysmooth::Result<()> {
    let report = reproduce_table("1", &ReproduceOptions::default())?;
    print!("{}", report.to_csv());
    for c in &report.cells {
        println!(
            "k={} {:<13} computed {:.4} published {:.4} {}",
            c.k,
            c.column,
            c.computed,
            c.published,
            if c.within { "ok" } else { "outside tolerance" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polysmooth::Result<()> {
    run()
}
