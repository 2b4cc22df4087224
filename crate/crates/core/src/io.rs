//! Reading and writing 8-bit RGB images as PNG or binary PPM (P6).
//!
//! The format is sniffed from the file's leading bytes when loading and chosen
//! from the extension when saving (`.ppm` / `.pnm` write PPM, anything else
//! writes PNG).

use std::fs::File;
use std::io::{BufReader, BufWriter, Cursor, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::RgbImage8;

const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";

pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage8> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Read {
        path: path.to_owned(),
        source,
    })?;
    decode_image(&bytes)
}

/// Decodes PNG or P6 PPM bytes.
pub fn decode_image(bytes: &[u8]) -> Result<RgbImage8> {
    if bytes.starts_with(PNG_MAGIC) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P6") {
        decode_ppm(bytes)
    } else if bytes.starts_with(b"P3") {
        Err(Error::UnsupportedFormat("ASCII PPM (P3); only binary P6 is supported".into()))
    } else {
        Err(Error::UnsupportedFormat("expected PNG or binary PPM (P6)".into()))
    }
}

pub fn save_image(img: &RgbImage8, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let is_ppm = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("ppm") || e.eq_ignore_ascii_case("pnm"));
    let bytes = if is_ppm { encode_ppm(img) } else { encode_png(img)? };
    let write_err = |source| Error::Write {
        path: path.to_owned(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(write_err)?);
    out.write_all(&bytes).map_err(write_err)?;
    out.flush().map_err(write_err)
}

fn decode_png(bytes: &[u8]) -> Result<RgbImage8> {
    let malformed = |e: png::DecodingError| Error::Malformed(format!("PNG: {e}"));
    let mut decoder = png::Decoder::new(BufReader::new(Cursor::new(bytes)));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(malformed)?;
    let info = reader.info();
    if info.bit_depth != png::BitDepth::Eight {
        return Err(Error::UnsupportedBitDepth(format!(
            "{}-bit PNG",
            info.bit_depth as u8
        )));
    }
    if info.color_type != png::ColorType::Rgb {
        return Err(Error::UnsupportedFormat(format!(
            "PNG colour type {:?}; only 8-bit RGB is supported",
            info.color_type
        )));
    }
    let (width, height) = (info.width as usize, info.height as usize);
    let mut buf = vec![0; reader.output_buffer_size().ok_or_else(|| Error::Malformed("PNG too large".into()))?];
    let frame = reader.next_frame(&mut buf).map_err(malformed)?;
    buf.truncate(frame.buffer_size());
    RgbImage8::from_interleaved(width, height, &buf)
}

fn encode_png(img: &RgbImage8) -> Result<Vec<u8>> {
    let encoding = |e: png::EncodingError| Error::Malformed(format!("PNG: {e}"));
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, img.width() as u32, img.height() as u32);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().map_err(encoding)?;
        writer
            .write_image_data(&img.to_interleaved())
            .map_err(encoding)?;
        writer.finish().map_err(encoding)?;
    }
    Ok(out)
}

fn encode_ppm(img: &RgbImage8) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.to_interleaved());
    out
}

fn decode_ppm(bytes: &[u8]) -> Result<RgbImage8> {
    let mut pos = 2;
    let mut field = |name: &str| -> Result<u32> {
        // Skip whitespace and `#` comments.
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Malformed(format!("PPM header: missing {name}")))
    };
    let width = field("width")? as usize;
    let height = field("height")? as usize;
    let maxval = field("maxval")?;
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Malformed("PPM header: no separator before raster".into()));
    }
    let raster = &bytes[pos + 1..];
    let expected = width * height * 3;
    if raster.len() < expected {
        return Err(Error::Malformed(format!(
            "PPM raster has {} bytes, expected {expected}",
            raster.len()
        )));
    }
    RgbImage8::from_interleaved(width, height, &raster[..expected])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RgbImage8 {
        let bytes: Vec<u8> = (0..4 * 3 * 3).map(|i| (i * 7 % 256) as u8).collect();
        RgbImage8::from_interleaved(4, 3, &bytes).unwrap()
    }

    #[test]
    fn ppm_single_red_pixel() {
        let img = decode_image(b"P6\n1 1\n255\n\xff\x00\x00").unwrap();
        assert_eq!(img.to_interleaved(), [255, 0, 0]);
    }

    #[test]
    fn ppm_with_comments() {
        let img = decode_image(b"P6 # made by hand\n2 1 # size\n255\n\x01\x02\x03\x04\x05\x06").unwrap();
        assert_eq!(img.r().data(), &[1, 4]);
    }

    #[test]
    fn ppm_errors_are_distinct() {
        assert!(matches!(
            decode_image(b"P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00"),
            Err(Error::UnsupportedMaxval(65535))
        ));
        assert!(matches!(decode_image(b"P6\n2 2\n255\n\x00"), Err(Error::Malformed(_))));
        assert!(matches!(decode_image(b"P3\n1 1\n255\n0 0 0"), Err(Error::UnsupportedFormat(_))));
        assert!(matches!(decode_image(b"GIF89a"), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn png_and_ppm_agree() {
        let img = sample();
        let png = decode_image(&encode_png(&img).unwrap()).unwrap();
        let ppm = decode_image(&encode_ppm(&img)).unwrap();
        assert_eq!(png, img);
        assert_eq!(ppm, img);
    }

    #[test]
    fn sixteen_bit_png_is_rejected() {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, 1, 1);
            enc.set_color(png::ColorType::Rgb);
            enc.set_depth(png::BitDepth::Sixteen);
            let mut w = enc.write_header().unwrap();
            w.write_image_data(&[0; 6]).unwrap();
        }
        let err = decode_image(&out).unwrap_err();
        assert!(matches!(err, Error::UnsupportedBitDepth(_)));
        assert!(err.to_string().starts_with("unsupported bit depth"));
    }

    #[test]
    fn rgba_png_is_rejected() {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, 1, 1);
            enc.set_color(png::ColorType::Rgba);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header().unwrap();
            w.write_image_data(&[0; 4]).unwrap();
        }
        assert!(matches!(decode_image(&out), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_image("/nonexistent/dir/x.png"),
            Err(Error::Read { .. })
        ));
        assert!(matches!(
            save_image(&sample(), "/nonexistent/dir/x.png"),
            Err(Error::Write { .. })
        ));
    }
}
