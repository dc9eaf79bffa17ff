//! Local energy levels, the resonance and the dressed states of the driven band.
//!
//! cargo run --example local_spectrum

use pulsedistill::model::{
    dressed_spectrum, local_spectrum, mirrored_resonance_frequency, resonance_frequency, rwa_validity,
    LOCAL_LABELS,
};
use pulsedistill::SystemParams;

fn main() -> pulsedistill::Result<()> {
    let p = SystemParams::default();
    println!("omega_s = {}, omega_b = {}, J = {}", p.omega_s, p.omega_b, p.j);

    for (label, e) in LOCAL_LABELS.iter().zip(local_spectrum(&p).as_array()) {
        println!("  {label:>6}  {e:+.3}");
    }
    println!("spin-up resonance   omega = {}", resonance_frequency(&p));
    println!("spin-down resonance omega = {}", mirrored_resonance_frequency(&p));

    println!("\nrotating frame, on resonance:");
    println!("{:>6} {:>10} {:>10} {:>6}", "g", "eta12", "eta34", "RWA ok");
    for g in [0.01, 0.025, 0.05, 0.1, 0.25, 0.5] {
        let q = p.with_g(g);
        let d = dressed_spectrum(&q)?;
        let v = rwa_validity(&q)?;
        println!("{g:>6} {:>10.3} {:>10.3} {:>6}", d.eta12, d.eta34, v.valid);
    }

    let d = dressed_spectrum(&p)?;
    println!("\ndressed energies at g = {}: {:?}", p.g, d.energies());
    Ok(())
}
