// Copyright 2026 The povmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstring>

#include "povmsim/error.hpp"
#include "povmsim/io.hpp"

using namespace povmsim;

namespace {

bool bit_equal(const CMatrix &a, const CMatrix &b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(),
                       sizeof(cplx) * static_cast<std::size_t>(a.size())) == 0;
}

void check_same(const MeasurementModel &a, const MeasurementModel &b) {
    CHECK(a.object_dim() == b.object_dim());
    CHECK(a.ancilla_dim() == b.ancilla_dim());
    CHECK(bit_equal(a.unitary().matrix(), b.unitary().matrix()));
    CHECK(bit_equal(a.ancilla_init().matrix(), b.ancilla_init().matrix()));
    REQUIRE(a.pointer().size() == b.pointer().size());
    for (std::size_t k = 0; k < a.pointer().size(); ++k)
        CHECK(bit_equal(a.pointer()[k].matrix(), b.pointer()[k].matrix()));
    CHECK(a.pointer().labels() == b.pointer().labels());
    CHECK(a.hamiltonian().has_value() == b.hamiltonian().has_value());
    if (a.hamiltonian()) {
        CHECK(bit_equal(a.hamiltonian()->h.matrix(), b.hamiltonian()->h.matrix()));
        CHECK(a.hamiltonian()->time == b.hamiltonian()->time);
    }
}

} // namespace

TEST_CASE("model JSON round trip is bit exact") {
    Xoshiro256 rng(61);
    for (int i = 0; i < 20; ++i) {
        const auto m = random_model(rng, 2 + i % 2, 2 + i % 3, 2 + i % 3, i % 2 == 0);
        const std::string text = model_to_json(m);
        const auto back = model_from_json(text);
        check_same(m, back);
        CHECK(model_to_json(back) == text);
    }
    check_same(controlled_flip_model(), model_from_json(model_to_json(controlled_flip_model())));
}

TEST_CASE("malformed model documents") {
    CHECK_THROWS_AS(model_from_json("{"), ValidationError);
    CHECK_THROWS_AS(model_from_json("{}"), ValidationError);
    std::string text = model_to_json(controlled_flip_model());
    const auto pos = text.find("\"ancilla_dim\": 2");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 16, "\"ancilla_dim\": 3");
    CHECK_THROWS_AS(model_from_json(text), ValidationError);
}

TEST_CASE("flat-key and JSON configs give the same parameters") {
    const auto a = sg_params_from_text("# comment\nvariant = corrected\nb = 4.5\n"
                                       "grid_n = 64  # inline\ntau=0.5\n");
    const auto b = sg_params_from_text(
        R"({"variant": "corrected", "b": 4.5, "grid_n": 64, "tau": 0.5})");
    CHECK(a.variant == sg::Variant::Corrected);
    CHECK(a.b == 4.5);
    CHECK(a.grid_n == 64);
    CHECK(a.tau == 0.5);
    CHECK(sg_params_to_json(a) == sg_params_to_json(b));
    // Defaults fill missing fields.
    CHECK(a.mu == 1.0);
    CHECK(a.extent == 20.0);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(sg_params_from_text("variant = ideal\nbogus = 1\n"), ValidationError);
    CHECK_THROWS_AS(sg_params_from_text("no equals sign\n"), ValidationError);
    CHECK_THROWS_AS(sg_params_from_text("grid_n = 100\n"), ValidationError);
    CHECK_THROWS_AS(sg_params_from_text("b = \"six\"\n"), ValidationError);
    CHECK_THROWS_AS(sg_params_from_text("{\"b\": }"), ValidationError);
}

TEST_CASE("resolved params echo round-trips") {
    sg::Params p = sg::Params::defaults(sg::Variant::Quadrupole);
    p.b = 3.25;
    const auto back = sg_params_from_text(sg_params_to_json(p));
    CHECK(back.b == 3.25);
    CHECK(back.variant == sg::Variant::Quadrupole);
}

TEST_CASE("SHA-256 known answers") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
