//! Large-n limit of k0 over smoothness and tolerance, as CSV on stdout.

use qfload::cli::heatmap_rows;

fn main() -> qfload::Result<()> {
    let rows = heatmap_rows(17, 5)?;
    println!("eta,epsilon,k0");
    for (eta, eps, k0) in &rows {
        println!("{eta:.4},{eps},{k0}");
    }
    let max = rows.iter().map(|r| r.2).max().unwrap_or(2);
    eprintln!("{} points, max k0 {max}", rows.len());
    Ok(())
}
