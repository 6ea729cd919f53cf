#ifndef TERMSCAPE_TERMSCAPE_HPP
#define TERMSCAPE_TERMSCAPE_HPP

#include "termscape/error.hpp"
#include "termscape/random.hpp"
#include "termscape/json_io.hpp"
#include "termscape/strings.hpp"
#include "termscape/corpus.hpp"
#include "termscape/text.hpp"
#include "termscape/terms.hpp"
#include "termscape/cooccur.hpp"
#include "termscape/layout.hpp"
#include "termscape/impact.hpp"
#include "termscape/render.hpp"
#include "termscape/pipeline.hpp"

#endif
