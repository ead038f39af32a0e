//! Full verification report for a random non-symmetric model, printed as JSON.

use boundary_triples::extensions::{verify_model, VerifyOptions};
use boundary_triples::models::synthetic_pair;
use boundary_triples::Result;

fn main() -> Result<()> {
    let model = synthetic_pair(42, 10, 3)?;
    let report = verify_model(&model, &VerifyOptions::default());
    for e in &report.entries {
        let defect = e.defect.map_or("-".to_string(), |d| format!("{d:.2e}"));
        println!("{:5} {:45} {defect:>10}", if e.pass { "ok" } else { "FAIL" }, e.name);
    }
    println!("overall: {}", if report.pass { "pass" } else { "fail" });
    Ok(())
}
