use dirscat_core::dirac::*;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for k in 0..50 {
        let xi = random_ball_point::<f64>(&mut rng, 30.0);
        let p = projection_symbol(xi, Sign::Plus);
        let ev = hermitian_eigenvalues(&p);
        if ev.iter().any(|v| v.is_nan()) {
            println!("sample {k} xi = {xi:?} produced NaN");
            // dump matrix
            for row in &p { for v in row { print!("({:+.6e},{:+.6e}) ", v.re, v.im); } println!(); }
            break;
        }
    }
    println!("done");
}
