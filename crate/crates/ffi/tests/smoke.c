#include <stdio.h>
#include <string.h>
#include "kodaira_kit.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      return 1;                                                  \
    }                                                            \
  } while (0)

static const char *I3 =
    "{\"nodes\":[{\"id\":\"C0\",\"self_int\":-2,\"rational_smooth\":true},"
    "{\"id\":\"C1\",\"self_int\":-2,\"rational_smooth\":true},"
    "{\"id\":\"C2\",\"self_int\":-2,\"rational_smooth\":true}],"
    "\"pairwise\":[{\"a\":\"C0\",\"b\":\"C1\",\"value\":1},"
    "{\"a\":\"C0\",\"b\":\"C2\",\"value\":1},{\"a\":\"C1\",\"b\":\"C2\",\"value\":1}],"
    "\"points\":["
    "{\"id\":\"p\",\"local_type\":\"ordinary\",\"incidences\":[{\"curve\":\"C0\",\"mult\":1},{\"curve\":\"C1\",\"mult\":1}]},"
    "{\"id\":\"q\",\"local_type\":\"ordinary\",\"incidences\":[{\"curve\":\"C1\",\"mult\":1},{\"curve\":\"C2\",\"mult\":1}]},"
    "{\"id\":\"r\",\"local_type\":\"ordinary\",\"incidences\":[{\"curve\":\"C2\",\"mult\":1},{\"curve\":\"C0\",\"mult\":1}]}]}";

int main(void) {
  KkSurface *s = NULL;
  KkBundle *e = NULL;
  int64_t v = 0;
  CHECK(kk_surface_new(0, 24, 1, 1, 0, true, true, &s) == KK_STATUS_OK);
  CHECK(kk_bundle_new(3, 0, 0, 0, &e) == KK_STATUS_OK);
  CHECK(kk_h1_minus_h2(s, e, 0, &v) == KK_STATUS_OK && v == 14);
  kk_bundle_free(e);
  kk_surface_free(s);

  bool holds = false;
  CHECK(kk_verify_riero(&holds, NULL) == KK_STATUS_OK && holds);

  KkConfig *cfg = NULL, *up = NULL;
  char *exc = NULL;
  CHECK(kk_config_from_json(I3, &cfg) == KK_STATUS_OK);
  CHECK(kk_check_p(cfg, NULL, &holds, NULL) == KK_STATUS_OK && holds);
  CHECK(kk_blow_up(cfg, "p", &up, &exc) == KK_STATUS_OK);
  size_t n = 0;
  CHECK(kk_config_len(up, &n) == KK_STATUS_OK && n == 4);
  kk_string_free(exc);
  kk_config_free(up);

  CHECK(kk_check_p(cfg, "C9", &holds, NULL) == KK_STATUS_DOMAIN_ERROR);
  char *msg = kk_last_error();
  CHECK(msg != NULL && strlen(msg) > 0);
  kk_string_free(msg);
  kk_config_free(cfg);

  puts("smoke ok");
  return 0;
}
