#!/usr/bin/env python3
"""Regenerates src/pdf/std_tables.cpp from the public Adobe metric/encoding data
shipped with reportlab (standard 14 AFM widths, base encodings, glyph list)."""
import sys
from reportlab.pdfbase import _fontdata as fd
from reportlab.pdfbase import _glyphlist as gl


def cstr(s):
    return '"' + s.replace('\\', '\\\\').replace('"', '\\"') + '"'


def main(out_path):
    out = []
    w = out.append
    w('// Generated by tools/gen_pdf_tables.py. Do not edit.')
    w('#include "std_tables.hpp"')
    w('')
    w('namespace chunkwise::pdf::tables {')
    w('')
    for enc in ('StandardEncoding', 'WinAnsiEncoding', 'MacRomanEncoding', 'SymbolEncoding',
                'ZapfDingbatsEncoding', 'PDFDocEncoding'):
        names = fd.encodings[enc]
        w('const char* const k%s[256] = {' % enc)
        row = []
        for n in names:
            row.append('nullptr' if n is None else cstr(n))
        for i in range(0, 256, 8):
            w('    ' + ', '.join(row[i:i + 8]) + ',')
        w('};')
        w('')
    items = sorted(gl._glyphname2unicode.items())
    w('const GlyphCode kGlyphList[] = {')
    for name, code in items:
        w('    {%s, 0x%04X},' % (cstr(name), code))
    w('};')
    w('const std::size_t kGlyphListSize = %d;' % len(items))
    w('')
    for font in fd.standardFonts:
        widths = sorted(fd.widthsByFontGlyph[font].items())
        ident = 'k' + font.replace('-', '') + 'Widths'
        w('static const GlyphWidth %s[] = {' % ident)
        for name, width in widths:
            w('    {%s, %d},' % (cstr(name), width))
        w('};')
    w('')
    w('const StdFont kStdFonts[] = {')
    for font in fd.standardFonts:
        asc, desc = fd.ascent_descent[font]
        ident = 'k' + font.replace('-', '') + 'Widths'
        bold = 'Bold' in font
        italic = 'Italic' in font or 'Oblique' in font
        mono = font.startswith('Courier')
        symbolic = font in ('Symbol', 'ZapfDingbats')
        w('    {%s, %d, %d, %s, %s, %s, %s, %s, sizeof(%s) / sizeof(%s[0])},' % (
            cstr(font), asc, desc, str(bold).lower(), str(italic).lower(), str(mono).lower(),
            str(symbolic).lower(), ident, ident, ident))
    w('};')
    w('const std::size_t kStdFontCount = %d;' % len(fd.standardFonts))
    w('')
    w('}  // namespace chunkwise::pdf::tables')
    with open(out_path, 'w') as f:
        f.write('\n'.join(out) + '\n')


if __name__ == '__main__':
    main(sys.argv[1] if len(sys.argv) > 1 else 'src/pdf/std_tables.cpp')
