#ifndef FROBREP_FROBREP_HPP
#define FROBREP_FROBREP_HPP

#include "frobrep/errors.hpp"
#include "frobrep/fp.hpp"
#include "frobrep/linalg.hpp"
#include "frobrep/test_algebra.hpp"
#include "frobrep/truncated_poly.hpp"
#include "frobrep/ring_matrix.hpp"
#include "frobrep/autgroup.hpp"
#include "frobrep/char_ring.hpp"
#include "frobrep/glnrep.hpp"
#include "frobrep/induced.hpp"
#include "frobrep/derham.hpp"
#include "frobrep/irreducibles.hpp"
#include "frobrep/json_io.hpp"

#endif  // FROBREP_FROBREP_HPP
