//! Planar image storage.
//!
//! Planes are row-major with a top-left origin. An 8-bit plane ([`PlaneU8`]) is
//! the storage and metric domain; a unit plane ([`PlaneF`]) holds the
//! normalized intensities every equalizer works on. Rows are the first image
//! dimension and columns the second, so a plane is `height` rows of `width`
//! samples.

use crate::error::{Error, Result};

fn check_len(width: usize, height: usize, len: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::EmptyPlane);
    }
    match width.checked_mul(height) {
        Some(n) if n == len => Ok(()),
        _ => Err(Error::PlaneLength {
            width,
            height,
            actual: len,
        }),
    }
}

/// One channel of 8-bit levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneU8 {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl PlaneU8 {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_len(width, height, data.len())?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, level: u8) -> Result<Self> {
        Self::new(width, height, vec![level; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false; planes are never empty.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.data[row * self.width + col]
    }

    /// Applies a per-level lookup table.
    pub fn map_levels(&self, lut: &[u8; 256]) -> PlaneU8 {
        PlaneU8 {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| lut[usize::from(v)]).collect(),
        }
    }
}

/// One channel of intensities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneF {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl PlaneF {
    /// Builds a plane, rejecting zero dimensions, length mismatches and any
    /// sample outside `[0, 1]` (including NaN).
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_len(width, height, data.len())?;
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::OutOfRange { index, value });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width.saturating_mul(height)])
    }

    /// Caller guarantees the invariants already hold.
    pub(crate) fn from_parts(width: usize, height: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height);
        debug_assert!(data.iter().all(|v| (0.0..=1.0).contains(v)));
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false; planes are never empty.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    /// Mean intensity, see [`plane_mean`].
    pub fn mean(&self) -> f64 {
        plane_mean(self)
    }

    /// Applies `f` to every sample. `f` must map `[0, 1]` into `[0, 1]`.
    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> PlaneF {
        PlaneF::from_parts(self.width, self.height, self.data.iter().map(|&v| f(v)).collect())
    }
}

/// `level / 255`, exactly.
pub fn normalize_plane(p: &PlaneU8) -> PlaneF {
    PlaneF::from_parts(
        p.width,
        p.height,
        p.data.iter().map(|&v| f64::from(v) / 255.0).collect(),
    )
}

/// Scalar form of [`denormalize_plane`].
pub fn quantize(value: f64) -> u8 {
    // f64::round rounds half away from zero.
    (value * 255.0).round().clamp(0.0, 255.0) as u8
}

/// `round(intensity * 255)`, half away from zero, clamped to `[0, 255]`.
pub fn denormalize_plane(p: &PlaneF) -> PlaneU8 {
    PlaneU8 {
        width: p.width,
        height: p.height,
        data: p.data.iter().map(|&v| quantize(v)).collect(),
    }
}

/// Arithmetic mean of all samples, accumulated row-major with Neumaier
/// compensated summation.
pub fn plane_mean(p: &PlaneF) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in &p.data {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    ((sum + comp) / p.data.len() as f64).clamp(0.0, 1.0)
}

fn same_dims(a: (usize, usize), b: (usize, usize), c: (usize, usize), what: &str) -> Result<()> {
    if a == b && b == c {
        Ok(())
    } else {
        Err(Error::DimensionMismatch(format!(
            "{what} planes are {}x{}, {}x{} and {}x{}",
            a.0, a.1, b.0, b.1, c.0, c.1
        )))
    }
}

/// Three unit-interval planes: red, green, blue.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    r: PlaneF,
    g: PlaneF,
    b: PlaneF,
}

impl RgbImage {
    pub fn new(r: PlaneF, g: PlaneF, b: PlaneF) -> Result<Self> {
        same_dims(r.dims(), g.dims(), b.dims(), "RGB")?;
        Ok(Self { r, g, b })
    }

    pub fn r(&self) -> &PlaneF {
        &self.r
    }

    pub fn g(&self) -> &PlaneF {
        &self.g
    }

    pub fn b(&self) -> &PlaneF {
        &self.b
    }

    pub fn planes(&self) -> [&PlaneF; 3] {
        [&self.r, &self.g, &self.b]
    }

    pub fn into_planes(self) -> [PlaneF; 3] {
        [self.r, self.g, self.b]
    }

    pub fn width(&self) -> usize {
        self.r.width
    }

    pub fn height(&self) -> usize {
        self.r.height
    }

    pub fn dims(&self) -> (usize, usize) {
        self.r.dims()
    }

    /// `(r, g, b)` of the pixel at flat index `i`.
    pub fn pixel(&self, i: usize) -> (f64, f64, f64) {
        (self.r.data[i], self.g.data[i], self.b.data[i])
    }

    /// Quantizes every plane to 8 bits.
    pub fn to_u8(&self) -> RgbImage8 {
        RgbImage8 {
            r: denormalize_plane(&self.r),
            g: denormalize_plane(&self.g),
            b: denormalize_plane(&self.b),
        }
    }
}

/// Three 8-bit planes: red, green, blue. The file and metric form of an image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RgbImage8 {
    r: PlaneU8,
    g: PlaneU8,
    b: PlaneU8,
}

impl RgbImage8 {
    pub fn new(r: PlaneU8, g: PlaneU8, b: PlaneU8) -> Result<Self> {
        same_dims(r.dims(), g.dims(), b.dims(), "RGB")?;
        Ok(Self { r, g, b })
    }

    /// Splits interleaved `RGBRGB...` bytes into planes.
    pub fn from_interleaved(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != width.saturating_mul(height).saturating_mul(3) {
            return Err(Error::Malformed(format!(
                "{} bytes for a {width}x{height} RGB image",
                bytes.len()
            )));
        }
        let channel = |c: usize| bytes.iter().skip(c).step_by(3).copied().collect::<Vec<_>>();
        Self::new(
            PlaneU8::new(width, height, channel(0))?,
            PlaneU8::new(width, height, channel(1))?,
            PlaneU8::new(width, height, channel(2))?,
        )
    }

    pub fn to_interleaved(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.r.len() * 3);
        for ((&r, &g), &b) in self.r.data.iter().zip(&self.g.data).zip(&self.b.data) {
            out.extend_from_slice(&[r, g, b]);
        }
        out
    }

    pub fn r(&self) -> &PlaneU8 {
        &self.r
    }

    pub fn g(&self) -> &PlaneU8 {
        &self.g
    }

    pub fn b(&self) -> &PlaneU8 {
        &self.b
    }

    pub fn planes(&self) -> [&PlaneU8; 3] {
        [&self.r, &self.g, &self.b]
    }

    pub fn width(&self) -> usize {
        self.r.width
    }

    pub fn height(&self) -> usize {
        self.r.height
    }

    pub fn dims(&self) -> (usize, usize) {
        self.r.dims()
    }

    pub fn to_unit(&self) -> RgbImage {
        RgbImage {
            r: normalize_plane(&self.r),
            g: normalize_plane(&self.g),
            b: normalize_plane(&self.b),
        }
    }
}

/// Hue, saturation and intensity planes. Hue is stored as a fraction of a full
/// turn, so every plane lives in the unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct HsiImage {
    h: PlaneF,
    s: PlaneF,
    i: PlaneF,
}

impl HsiImage {
    /// Rejects mismatched planes and any pixel with zero saturation but
    /// non-zero hue.
    pub fn new(h: PlaneF, s: PlaneF, i: PlaneF) -> Result<Self> {
        same_dims(h.dims(), s.dims(), i.dims(), "HSI")?;
        if let Some(idx) = s
            .data
            .iter()
            .zip(&h.data)
            .position(|(&s, &h)| s == 0.0 && h != 0.0)
        {
            return Err(Error::UndefinedHue(idx));
        }
        Ok(Self { h, s, i })
    }

    pub(crate) fn from_parts(h: PlaneF, s: PlaneF, i: PlaneF) -> Self {
        Self { h, s, i }
    }

    pub fn h(&self) -> &PlaneF {
        &self.h
    }

    pub fn s(&self) -> &PlaneF {
        &self.s
    }

    pub fn i(&self) -> &PlaneF {
        &self.i
    }

    pub fn dims(&self) -> (usize, usize) {
        self.i.dims()
    }

    /// Replaces the intensity plane, keeping hue and saturation untouched.
    pub fn with_intensity(&self, i: PlaneF) -> Result<HsiImage> {
        same_dims(self.h.dims(), self.s.dims(), i.dims(), "HSI")?;
        Ok(Self {
            h: self.h.clone(),
            s: self.s.clone(),
            i,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_endpoints_and_midpoint() {
        let p = PlaneU8::new(3, 1, vec![0, 255, 128]).unwrap();
        let f = normalize_plane(&p);
        assert_eq!(f.data(), &[0.0, 1.0, 128.0 / 255.0]);
        assert!((f.data()[2] - 0.501961).abs() < 1e-6);
    }

    #[test]
    fn denormalize_rounds_half_away_from_zero() {
        let p = PlaneF::new(3, 1, vec![1.0, 0.5, 0.0]).unwrap();
        assert_eq!(denormalize_plane(&p).data(), &[255, 128, 0]);
    }

    #[test]
    fn mean_of_small_planes() {
        let p = PlaneF::new(2, 2, vec![0.0, 0.5, 0.5, 1.0]).unwrap();
        assert_eq!(p.mean(), 0.5);
        assert_eq!(PlaneF::filled(7, 3, 0.25).unwrap().mean(), 0.25);
    }

    #[test]
    fn constructors_reject_bad_planes() {
        assert!(matches!(PlaneF::new(0, 3, vec![]), Err(Error::EmptyPlane)));
        assert!(matches!(PlaneU8::new(2, 0, vec![]), Err(Error::EmptyPlane)));
        assert_eq!(
            PlaneU8::new(2, 2, vec![1, 2, 3]).unwrap_err().to_string(),
            "plane data has 3 samples, expected 2x2"
        );
        assert!(matches!(
            PlaneF::new(2, 1, vec![0.2, 1.5]),
            Err(Error::OutOfRange { index: 1, .. })
        ));
        assert!(PlaneF::new(1, 1, vec![f64::NAN]).is_err());
    }

    #[test]
    fn rgb_rejects_mismatched_planes() {
        let a = PlaneF::filled(2, 2, 0.1).unwrap();
        let b = PlaneF::filled(2, 3, 0.1).unwrap();
        assert!(matches!(
            RgbImage::new(a.clone(), a, b),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn hsi_rejects_hue_on_gray() {
        let h = PlaneF::filled(1, 1, 0.3).unwrap();
        let s = PlaneF::filled(1, 1, 0.0).unwrap();
        let i = PlaneF::filled(1, 1, 0.5).unwrap();
        assert!(matches!(HsiImage::new(h, s, i), Err(Error::UndefinedHue(0))));
    }

    #[test]
    fn interleave_round_trip() {
        let bytes: Vec<u8> = (0..18).collect();
        let img = RgbImage8::from_interleaved(3, 2, &bytes).unwrap();
        assert_eq!(img.r().data(), &[0, 3, 6, 9, 12, 15]);
        assert_eq!(img.b().get(1, 2), 17);
        assert_eq!(img.to_interleaved(), bytes);
    }

    proptest! {
        #[test]
        fn quantization_round_trip_is_exact(data in proptest::collection::vec(any::<u8>(), 1..200)) {
            let p = PlaneU8::new(data.len(), 1, data).unwrap();
            prop_assert_eq!(denormalize_plane(&normalize_plane(&p)), p);
        }

        #[test]
        fn normalize_is_monotone(a in any::<u8>(), b in any::<u8>()) {
            prop_assume!(a < b);
            let f = normalize_plane(&PlaneU8::new(2, 1, vec![a, b]).unwrap());
            prop_assert!(f.data()[0] < f.data()[1]);
        }

        #[test]
        fn mean_matches_naive_and_ignores_order(
            data in proptest::collection::vec(0.0f64..=1.0, 256),
            seed in any::<u64>(),
        ) {
            let p = PlaneF::new(16, 16, data.clone()).unwrap();
            let mut naive = 0.0;
            for row in 0..16 {
                for col in 0..16 {
                    naive += data[row * 16 + col];
                }
            }
            naive /= 256.0;
            let m = p.mean();
            prop_assert!((0.0..=1.0).contains(&m));
            prop_assert!((m - naive).abs() < 1e-12);

            use rand::{seq::SliceRandom, SeedableRng};
            let mut shuffled = data;
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let q = PlaneF::new(16, 16, shuffled).unwrap();
            prop_assert!((q.mean() - m).abs() < 1e-12);
        }
    }
}
