//! Manufacture a low-contrast twin of an image.
//!
//!     cargo run --example degrade [input] [output] [gain] [bias] [gamma]

use iterpow::{degrade, fixtures, io, DegradeParams};

fn main() -> iterpow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let input = match args.first() {
        Some(path) => io::load_image(path)?,
        None => fixtures::gradient_card(96, 96),
    };
    let mut params = DegradeParams::default();
    let num = |i: usize, default: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(default);
    params.gain = num(2, params.gain);
    params.bias = num(3, params.bias);
    params.gamma = num(4, params.gamma);

    let low = degrade(&input, &params)?;
    for (name, a, b) in [("R", input.r(), low.r()), ("G", input.g(), low.g()), ("B", input.b(), low.b())] {
        let stats = |p: &iterpow::PlaneU8| {
            let d = p.data();
            let mean = d.iter().map(|&v| f64::from(v)).sum::<f64>() / d.len() as f64 / 255.0;
            (*d.iter().min().unwrap(), *d.iter().max().unwrap(), mean)
        };
        let (lo0, hi0, m0) = stats(a);
        let (lo1, hi1, m1) = stats(b);
        println!("{name}: levels {lo0}..{hi0} mean {m0:.3}  ->  levels {lo1}..{hi1} mean {m1:.3}");
    }
    if let Some(path) = args.get(1) {
        io::save_image(&low, path)?;
        println!("wrote {path}");
    }
    Ok(())
}
