"""
문맥별 조건부 Shannon 접두 부호 모듈

주요 기능:
- build_codebooks: 혼합 법칙에 맞춘 (단계, 문맥) 별 코드북
- ContextCodebook.encode / decode: 부호화와 접두 복호
- pack_bits / unpack_bits: MSB 우선 바이트 직렬화

사용 예시:
    from coding import ContextCodebook

    book = ContextCodebook([0.5, 0.25, 0.25])
    print(book.codewords)  # {0: '0', 1: '10', 2: '11'}
"""

from .shannon_code import (
    CodebookSet, ContextCodebook, build_codebooks, build_codebooks_from_marginal, shannon_length
)
from .bitstream import decode_stream, encode_episode, pack_bits, unpack_bits

__all__ = [
    'CodebookSet',
    'ContextCodebook',
    'build_codebooks',
    'build_codebooks_from_marginal',
    'shannon_length',
    'decode_stream',
    'encode_episode',
    'pack_bits',
    'unpack_bits'
]
