"""
비트열 직렬화와 문맥 연쇄 부호화

비트열은 MSB 우선으로 바이트에 채우고, 마지막 바이트의 남는 비트는 0 으로 채운다.
채움 비트는 율 계산에 들어가지 않는다.
"""

from system.exceptions import MalformedPrefixError

BYTE_LENGTH = 8


def pack_bits(bits):
    """
    '0'/'1' 문자열 -> (bytes, 유효 비트 수)

    Raises:
        MalformedPrefixError: 0/1 이외 문자가 섞인 경우
    """
    if set(bits) - {"0", "1"}:
        raise MalformedPrefixError("bit string may only contain '0' and '1'")
    padded = bits.ljust(-(-len(bits) // BYTE_LENGTH) * BYTE_LENGTH, "0")
    data = bytes(int(padded[i:i + BYTE_LENGTH], 2) for i in range(0, len(padded), BYTE_LENGTH))
    return data, len(bits)


def unpack_bits(data, n_bits):
    """bytes -> 앞 n_bits 개의 '0'/'1' 문자열"""
    if n_bits > len(data) * BYTE_LENGTH:
        raise MalformedPrefixError(f"buffer holds {len(data) * BYTE_LENGTH} bits, {n_bits} requested")
    return "".join(format(byte, "08b") for byte in data)[:n_bits]


def encode_episode(codebooks, actions):
    """
    한 에피소드의 행동열 u_1..u_n 을 문맥별 부호어로 이어 붙임

    Returns:
        tuple: (비트열, 단계별 부호 길이 목록)
    """
    words = []
    for t, action in enumerate(actions, 1):
        words.append(codebooks.encode(t, actions[:t - 1], action))
    return "".join(words), [len(word) for word in words]


def decode_stream(codebooks, bits, episodes=None):
    """
    이어 붙인 비트열을 에피소드 단위로 복호

    각 단계의 문맥은 이미 복호한 행동으로 정해지므로 접두 부호만으로 경계가 정해진다.

    Args:
        codebooks (CodebookSet): 코드북 모음
        bits (str): 비트열
        episodes (int): 복호할 에피소드 수 (None 이면 비트열 끝까지)

    Returns:
        list: 에피소드별 행동 튜플 목록

    Raises:
        MalformedPrefixError: 부호어로 시작하지 않거나 에피소드 중간에 끝나는 비트열
    """
    decoded = []
    offset = 0
    while (episodes is None and offset < len(bits)) or (episodes is not None and len(decoded) < episodes):
        start = offset
        actions = []
        for t in range(1, codebooks.horizon + 1):
            symbol, consumed = codebooks.decode(t, actions, bits, offset)
            actions.append(symbol)
            offset += consumed
        decoded.append(tuple(actions))
        if episodes is None and offset == start:
            raise MalformedPrefixError("zero-length episodes cannot be framed without an episode count")
    if episodes is not None and offset != len(bits):
        raise MalformedPrefixError(f"{len(bits) - offset} trailing bits after {episodes} episodes")
    return decoded
