//! The random building blocks: Poisson fields, fading draws, sector
//! antennas, obstacle blockage and the mmWave path gain.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ims_core::geometry::{count_blockers, sample_homogeneous_ppp, sample_obstacles, AnnulusSector};
use ims_core::propagation::{mmwave_path_gain_db, sample_fading, FadingKind, MmWavePath, PathLossLaw, SectorAntenna};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let disk = AnnulusSector::disk(200.0)?;
    let field = sample_homogeneous_ppp(1.0 / 900.0, &disk, &mut rng)?;
    println!("{} transmitters in a 200 m disk (mean {:.1})", field.len(), disk.area() / 900.0);

    for kind in [FadingKind::Rayleigh, FadingKind::Nakagami { m: 3.0 }, FadingKind::Deterministic { c0: 0.9 }] {
        let n = 100_000;
        let mean = (0..n).map(|_| sample_fading(kind, &mut rng)).sum::<Result<f64, _>>()? / n as f64;
        println!("{kind}: sample mean {mean:.4}");
    }

    let law = PathLossLaw::new(10f64.powf(-2.27), 3.6, 1.0)?;
    println!("path gain at 20 m: {:.2} dB", 10.0 * law.gain(20.0).log10());

    let ant = SectorAntenna::new(20f64.to_radians(), 0.1)?;
    println!("20 deg sector, z = 0.1: main lobe {:.2}, side lobe {:.2}", ant.gain(true), ant.gain(false));

    let obstacles = sample_obstacles(1.0 / 400.0, &AnnulusSector::disk(100.0)?, 0.1, 10.0, 0.63, &mut rng)?;
    let n = count_blockers([0.0, 0.0], [80.0, 0.0], &obstacles);
    let path = MmWavePath { length_m: 80.0, n_blockers: n as u32, has_reflection: false, reflection_coeff: 1.0, penetration_loss_db: 10.0, shadow_sigma_db: 5.8 };
    println!("{} obstacles, {n} on an 80 m link, gain {:.1} dB", obstacles.len(), mmwave_path_gain_db(&path, &mut rng));
    Ok(())
}
