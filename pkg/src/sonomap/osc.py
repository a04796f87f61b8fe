"""OSC 1.0 message encoding/decoding and the UDP destination publisher."""

from __future__ import annotations

import logging
import socket
import struct
from dataclasses import dataclass

from .errors import MalformedPacket, UnsupportedType

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OscMessage:
    address: str
    arguments: tuple = ()


def _pad(data: bytes) -> bytes:
    return data + b"\x00" * (4 - len(data) % 4 if len(data) % 4 else 0)


def _osc_string(s: str) -> bytes:
    return _pad(s.encode("ascii") + b"\x00")


def osc_encode(message: OscMessage) -> bytes:
    if not message.address.startswith("/"):
        raise MalformedPacket(f"address must start with '/': {message.address!r}")
    tags = ","
    body = b""
    for arg in message.arguments:
        if isinstance(arg, bool):
            raise UnsupportedType(repr(arg))
        if isinstance(arg, int):
            tags += "i"
            body += struct.pack(">i", arg)
        elif isinstance(arg, float):
            tags += "f"
            body += struct.pack(">f", arg)
        elif isinstance(arg, str):
            tags += "s"
            body += _osc_string(arg)
        else:
            raise UnsupportedType(repr(arg))
    return _osc_string(message.address) + _osc_string(tags) + body


def _read_string(data: bytes, pos: int) -> tuple[str, int]:
    end = data.find(b"\x00", pos)
    if end < 0:
        raise MalformedPacket("unterminated string")
    s = data[pos:end].decode("ascii")
    next_pos = pos + ((end - pos) // 4 + 1) * 4
    return s, next_pos


def osc_decode(data: bytes) -> OscMessage:
    if len(data) % 4 != 0 or not data:
        raise MalformedPacket("length not a multiple of 4")
    address, pos = _read_string(data, 0)
    if not address.startswith("/"):
        raise MalformedPacket(f"address must start with '/': {address!r}")
    tags, pos = _read_string(data, pos)
    if not tags.startswith(","):
        raise MalformedPacket("missing typetag string")
    args = []
    for tag in tags[1:]:
        if tag == "i":
            if pos + 4 > len(data):
                raise MalformedPacket("truncated int32")
            args.append(struct.unpack_from(">i", data, pos)[0])
            pos += 4
        elif tag == "f":
            if pos + 4 > len(data):
                raise MalformedPacket("truncated float32")
            args.append(struct.unpack_from(">f", data, pos)[0])
            pos += 4
        elif tag == "s":
            args.append(_read_string(data, pos)[0])
            pos = _read_string(data, pos)[1]
        else:
            raise MalformedPacket(f"unsupported typetag {tag!r}")
    return OscMessage(address, tuple(args))


class OscPublisher:
    """Sends changed destination values (and a /sync heartbeat) over UDP.

    Unchanged values are suppressed; socket errors are logged, never fatal.
    """

    def __init__(self, host: str, port: int, destination_order: list[str]):
        self.addr = (host, port)
        self.order = list(destination_order)
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._last_sent: dict[str, float] = {}

    def publish(self, snapshot):
        for sid in self.order:
            value = struct.unpack(">f", struct.pack(">f", snapshot.values[sid]))[0]
            if self._last_sent.get(sid) == value:
                continue
            self._last_sent[sid] = value
            self._send(OscMessage("/" + sid, (value,)))
        self._send(OscMessage("/sync", (int(snapshot.frame_index),)))

    def _send(self, message: OscMessage):
        try:
            self._sock.sendto(osc_encode(message), self.addr)
        except OSError as exc:
            log.warning("OSC send failed: %s", exc)

    def close(self):
        self._sock.close()
