import random
import socket
import struct

import pytest

from sonomap.errors import MalformedPacket, UnsupportedType
from sonomap.osc import OscMessage, OscPublisher, osc_decode, osc_encode
from sonomap.signals import Snapshot


class TestEncode:
    def test_golden_float_message(self):
        data = osc_encode(OscMessage("/x", (1.5,)))
        assert data == bytes([0x2F, 0x78, 0x00, 0x00,
                              0x2C, 0x66, 0x00, 0x00,
                              0x3F, 0xC0, 0x00, 0x00])
        assert len(data) == 12

    def test_int_message(self):
        data = osc_encode(OscMessage("/a/b", (3,)))
        assert data[:8] == b"/a/b\x00\x00\x00\x00"
        assert data[8:12] == b",i\x00\x00"
        assert struct.unpack(">i", data[12:])[0] == 3

    def test_string_argument(self):
        data = osc_encode(OscMessage("/s", ("hello",)))
        assert b"hello\x00" in data
        assert len(data) % 4 == 0

    def test_address_must_start_with_slash(self):
        with pytest.raises(MalformedPacket):
            osc_encode(OscMessage("x", ()))

    def test_unsupported_type(self):
        with pytest.raises(UnsupportedType):
            osc_encode(OscMessage("/x", (b"raw",)))
        with pytest.raises(UnsupportedType):
            osc_encode(OscMessage("/x", (True,)))


class TestDecode:
    def test_round_trip_int(self):
        msg = OscMessage("/a/b", (3,))
        assert osc_decode(osc_encode(msg)) == msg

    def test_decoded_address_without_slash(self):
        bad = b"x\x00\x00\x00,\x00\x00\x00"
        with pytest.raises(MalformedPacket):
            osc_decode(bad)

    def test_truncated(self):
        data = osc_encode(OscMessage("/x", (1.5,)))
        with pytest.raises(MalformedPacket):
            osc_decode(data[:-4] + b"")  # missing float body
        with pytest.raises(MalformedPacket):
            osc_decode(data[:5])  # not mod 4

    def test_fuzz_round_trip(self):
        rng = random.Random(99)
        for _ in range(2000):
            address = "/" + "/".join(
                "".join(rng.choice("abcxyz09_") for _ in range(rng.randint(1, 8)))
                for _ in range(rng.randint(1, 3)))
            args = []
            for _ in range(rng.randint(0, 5)):
                kind = rng.random()
                if kind < 0.4:
                    args.append(rng.randint(-2 ** 31, 2 ** 31 - 1))
                elif kind < 0.8:
                    # float32-representable value
                    args.append(struct.unpack(">f", struct.pack(">f", rng.uniform(-1e6, 1e6)))[0])
                else:
                    args.append("".join(rng.choice("abc def123") for _ in range(rng.randint(0, 12))))
            msg = OscMessage(address, tuple(args))
            data = osc_encode(msg)
            assert len(data) % 4 == 0
            assert osc_decode(data) == msg


class TestPublisher:
    def make(self):
        recv = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        recv.bind(("127.0.0.1", 0))
        recv.settimeout(2.0)
        port = recv.getsockname()[1]
        pub = OscPublisher("127.0.0.1", port, ["scene/particles.size", "scene/fog.density"])
        return recv, pub

    def drain(self, recv, n):
        out = []
        for _ in range(n):
            out.append(osc_decode(recv.recv(4096)))
        return out

    def snapshot(self, frame, size, fog):
        return Snapshot(frame, frame * 0.01,
                        {"scene/particles.size": size, "scene/fog.density": fog}, 0)

    def test_changed_values_plus_sync(self):
        recv, pub = self.make()
        pub.publish(self.snapshot(0, 0.8, 0.2))
        msgs = self.drain(recv, 3)
        assert msgs[0].address == "/scene/particles.size"
        assert msgs[0].arguments[0] == pytest.approx(0.8)
        assert msgs[1].address == "/scene/fog.density"
        assert msgs[2] == OscMessage("/sync", (0,))

    def test_unchanged_suppressed(self):
        recv, pub = self.make()
        pub.publish(self.snapshot(0, 0.8, 0.2))
        self.drain(recv, 3)
        pub.publish(self.snapshot(1, 0.8, 0.2))
        msgs = self.drain(recv, 1)
        assert msgs == [OscMessage("/sync", (1,))]
        pub.publish(self.snapshot(2, 0.9, 0.2))
        msgs = self.drain(recv, 2)
        assert msgs[0].address == "/scene/particles.size"
        assert msgs[1] == OscMessage("/sync", (2,))

    def test_send_error_not_fatal(self):
        pub = OscPublisher("127.0.0.1", 9, [])  # discard port, likely closed
        pub._sock.close()  # force a socket error
        pub.publish(self.snapshot(0, 0, 0))  # must not raise
