export const CITIES_CSV = `city,region,area,population,bike score,transit score,walk score
Mexico City,North America,1485,8918,45,68,72
New York,North America,778,8468,62,84,88
Toronto,North America,630,2956,61,78,61
Sao Paulo,South America,1521,12330,44,70,66
Buenos Aires,South America,203,3076,58,74,80
Bogota,South America,1775,7413,59,60,69
London,Europe,1572,8982,64,89,81
Paris,Europe,105,2161,70,92,94
Berlin,Europe,891,3769,73,81,77
Tokyo,Asia,2194,13960,57,95,83
Seoul,Asia,605,9776,51,90,74
Singapore,Asia,728,5454,49,87,71
`;

export const IN_SCOPE_COLUMNS = [
  'region', 'area', 'population', 'bike score', 'transit score', 'walk score',
];

/** Poll until `probe` returns a truthy value. */
export async function until<T>(probe: () => T | null | undefined | false,
                               timeoutMs = 10_000,
                               what = 'condition'): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) {
      return value;
    }
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

/** Poll an async probe until it resolves truthy. */
export async function untilAsync<T>(probe: () => Promise<T | false>,
                                    timeoutMs = 30_000,
                                    what = 'condition'): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const value = await probe();
      if (value) {
        return value;
      }
    } catch {
      /* not ready yet */
    }
    if (Date.now() > deadline) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
}
