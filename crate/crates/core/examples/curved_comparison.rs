//! Eigenvalues on a curved crest profile against its straightening at δ.
use cornerlab::verify::curved_comparison;

fn main() -> cornerlab::Result<()> {
    let cmp = curved_comparison()?;
    println!("{:>3} {:>20} {:>20} {:>12} {:>12}", "k", "lambda curved", "lambda model", "difference", "normalized");
    for r in &cmp.rows {
        println!("{:>3} {:>20.8e} {:>20.8e} {:>12.3e} {:>12.4}", r.k, r.lambda_curved, r.lambda_model, r.difference, r.normalized);
    }
    println!("max normalized difference: {:.4}", cmp.max_normalized());
    Ok(())
}
