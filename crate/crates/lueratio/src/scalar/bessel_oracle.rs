//! Reference values of J, I, K at 30 digits (0 marks entries not tabulated).

pub(super) const JIK: &[(f64, f64, f64, f64, f64)] = &[
    (0.0, 0.001, 0.999999750000015625, 1.000000250000015625, 7.0236888005623813228),
    (0.0, 0.3, 0.97762624653829608922, 1.0226268793515969894, 1.3724600605442974106),
    (0.0, 1.0, 0.76519768655796655145, 1.2660658777520083356, 0.42102443824070833334),
    (0.0, 1.999, 0.22446753611808320826, 2.2779954074072240773, 0.11403383058923290871),
    (0.0, 2.0, 0.22389077914123566805, 2.2795853023360672674, 0.11389387274953343565),
    (0.0, 5.0, -0.17759677131433830435, 27.239871823604446895, 0.0036910983340425942747),
    (0.0, 12.0, 0.047689310796833536624, 18948.925349296308861, 2.2008253973114914005e-6),
    (0.0, 47.0, -0.071248789901806190803, 15061540511042150544.0, 7.0636202927397048487e-22),
    (0.0, 300.0, -0.033298554876305668007, 4.4758473679350521181e+128, 3.7236948548891432633e-132),
    (0.0, 10000.0, -0.0070961603533888014773, 0.0, 0.0),
    (0.5, 0.001, 0.025231321014980940973, 0.02523132942542268104, 39.593659513116643201),
    (0.5, 0.3, 0.43049351732812455754, 0.44360422491882005615, 1.6951610563392831358),
    (0.5, 1.0, 0.67139670714180309042, 0.93767488824548764672, 0.46106850444789455844),
    (0.5, 1.999, 0.51337902652879491038, 2.044626514772879538, 0.12008779543145005232),
    (0.5, 2.0, 0.51301613656182775167, 2.0462368630890550366, 0.11993777196806144737),
    (0.5, 5.0, -0.34216798479816180976, 26.477547497559065205, 0.0037766133746428825595),
    (0.5, 12.0, -0.12358853595594194375, 18743.609410523526747, 2.222979883570349352e-6),
    (0.5, 47.0, 0.014381863223220706598, 15021101692988268386.0, 7.0822354377018158019e-22),
    (0.5, 300.0, -0.04605463914475310566, 4.4739797022303323029e+128, 3.7252441396544857648e-132),
    (0.5, 10000.0, -0.0024384500245313915408, 0.0, 0.0),
    (1.0, 0.001, 0.00049999993750000261457, 0.00050000006250000261458, 999.99623815608555346),
    (1.0, 0.3, 0.14831881627310400238, 0.15169384000359277459, 3.0559920334573251072),
    (1.0, 1.0, 0.44005058574493351596, 0.56515910399248502721, 0.60190723019723457474),
    (1.0, 1.999, 0.57678907921302579779, 1.5891532106427281305, 0.14004984207710966262),
    (1.0, 2.0, 0.5767248077568733872, 1.5906368546373290634, 0.13986588181652242728),
    (1.0, 5.0, -0.32757913759146522204, 24.335642142450527199, 0.0040446134454521642084),
    (1.0, 12.0, -0.22344710449062761237, 18141.348781638831601, 2.2907574647671878159e-6),
    (1.0, 47.0, 0.091268764240007885609, 14900440309162838832.0, 7.1383737161166351857e-22),
    (1.0, 300.0, -0.031887431377499950314, 4.4683813850369544139e+128, 3.7298958583323726986e-132),
    (1.0, 10000.0, 0.0036474507555295803441, 0.0, 0.0),
    (2.0, 0.001, 1.2499998958333366406e-7, 1.2500001041666699739e-7, 1999999.5000009716277),
    (2.0, 0.3, 0.011165861949063963219, 0.01133461266097845475, 21.745740283593132212),
    (2.0, 1.0, 0.11490348493190048047, 0.13574766976703828118, 1.6248388986351774828),
    (2.0, 1.999, 0.35261008190395357614, 0.68804722267212848656, 0.25415373261735662548),
    (2.0, 2.0, 0.35283402861563771915, 0.68894844769873820405, 0.25375975456605586294),
    (2.0, 5.0, 0.046565116277752215532, 17.505614966624236015, 0.0053089437122234599581),
    (2.0, 12.0, -0.084930494878604805352, 15925.367219023170261, 2.5826183081060227032e-6),
    (2.0, 47.0, 0.07513256710350865402, 14427479221290540381.0, 7.3673808764042425162e-22),
    (2.0, 300.0, 0.033085972000455668339, 4.446058158701472422e+128, 3.7485608272780257479e-132),
    (2.0, 10000.0, 0.0070968898435399073933, 0.0, 0.0),
    (2.5, 0.001, 1.6820882278642757419e-9, 1.6820884681626111724e-9, 118899799.1115487877),
    (2.5, 0.3, 0.0026053018556586674554, 0.0026390148935902734586, 75.152140164374890497),
    (2.5, 1.0, 0.049496810228477942271, 0.057098909203048247351, 3.2274795311352619091),
    (2.5, 1.999, 0.22371315351768444867, 0.39642424857487025081, 0.3904655794952568535),
    (2.5, 2.0, 0.22392453146891576584, 0.39702708013939052333, 0.38979775889619970395),
    (2.5, 5.0, 0.24037720111131735285, 13.766882138682582598, 0.0064957750043857580024),
    (2.5, 12.0, 0.072422673831809521857, 14448.198920258086964, 2.8250369353706523016e-6),
    (2.5, 47.0, -0.0069905399837162343759, 14082707834395067373.0, 7.5439112652387381539e-22),
    (2.5, 300.0, 0.046063282993693454987, 4.429389037864769991e+128, 3.762620755855685772e-132),
    (2.5, 10000.0, 0.0024407290815813491086, 0.0, 0.0),
    (3.0, 0.001, 2.0833332031250033853e-11, 2.083333463541670052e-11, 7999999000.0001245002),
    (3.0, 0.3, 0.00055934304774884605867, 0.00056567119054670566479, 292.99919581469909867),
    (3.0, 1.0, 0.019563353982668405919, 0.022168424924331902476, 7.101262824737944506),
    (3.0, 1.999, 0.12878387107002283996, 0.21237037388008991407, 0.64861158818487676913),
    (3.0, 2.0, 0.1289432494744020511, 0.21273995923985265527, 0.64738539094863415316),
    (3.0, 5.0, 0.36483123061366699446, 10.331150169151138387, 0.0082917684152309321748),
    (3.0, 12.0, 0.19513693953109267725, 12832.893041964441514, 3.1516302341358620503e-6),
    (3.0, 47.0, -0.084874503209922042714, 13672569737138111991.0, 7.7653848545340175275e-22),
    (3.0, 300.0, 0.032328577670839359225, 4.4091006095876014482e+128, 3.7798766693627463752e-132),
    (3.0, 10000.0, -0.0036446119995921643812, 0.0, 0.0),
    (7.25, 0.001, 1.3946630184333591743e-28, 1.3946631029583931559e-28, 4.9449588525237002108e+26),
    (7.25, 0.3, 1.2659419188548417785e-10, 1.2728659234380918538e-10, 541340697.39946887633),
    (7.25, 1.0, 7.6082927893117911806e-7, 8.0836642081069760543e-7, 84499.91766571248207),
    (7.25, 1.999, 0.00010529873952018131318, 0.00013415667171935532376, 495.29071666792542565),
    (7.25, 2.0, 0.0001056682582793720275, 0.00013466010281425798085, 493.4213987286099559),
    (7.25, 5.0, 0.041494369148895932114, 0.18998437746389711837, 0.29846491422769927109),
    (7.25, 12.0, -0.12248641009330106757, 2071.1803784521685919, 0.000017215982446975531067),
    (7.25, 47.0, -0.079335053846015440295, 8568163181718082986.8, 1.2271529871852464729e-21),
    (7.25, 300.0, 0.020362628288804656763, 4.0998455076426058501e+128, 4.064012879407185762e-132),
    (7.25, 10000.0, -0.0060721344542019438926, 0.0, 0.0),
    (20.0, 0.001, 3.9199043029592649358e-85, 3.9199043962903208792e-85, 6.3777065563973764534e+82),
    (20.0, 0.3, 1.3653224688572001285e-35, 1.3682512967755114633e-35, 1.8269437047529326324e+33),
    (20.0, 1.0, 3.8735030085246577189e-25, 3.9668359858190200557e-25, 6.2943693604245351667e+22),
    (20.0, 1.999, 3.8801537908948274397e-19, 4.2674563805168483186e-19, 58291753283859662.564),
    (20.0, 2.0, 3.9189728050907538391e-19, 4.3105605761095483322e-19, 57708568527002410.05),
    (20.0, 5.0, 2.7703300521289416874e-11, 5.0242393579718059921e-11, 482700052.06214846917),
    (20.0, 12.0, 0.00025121327024539953203, 0.0078513427371897798137, 2.7299583384223753167),
    (20.0, 47.0, 0.11795148529008352759, 217694427456195783.34, 4.4966569328039465405e-20),
    (20.0, 300.0, -0.0064811516887627689586, 2.2959873033106908835e+128, 7.2429734231571056177e-132),
    (20.0, 10000.0, -0.0071676996068597708114, 0.0, 0.0),
    (49.5, 0.001, 9.2578696207738347522e-228, 9.2578697124359106592e-228, 1.0910728291390356151e+225),
    (49.5, 0.3, 3.8354795603070270876e-105, 3.8388988375849522105e-105, 2.6311775714611971974e+102),
    (49.5, 1.0, 2.9131375175253564762e-79, 2.9421237226919675832e-79, 3.4325370456851156532e+76),
    (49.5, 1.999, 2.2292122833195350893e-64, 2.3191776393527187404e-64, 4.3518788771690194321e+61),
    (49.5, 2.0, 2.2850426098508503947e-64, 2.3773552636255772393e-64, 4.2453780928386362274e+61),
    (49.5, 5.0, 1.0273352081104649639e-44, 1.3158646268316443492e-44, 7.637450037892315615e+41),
    (49.5, 12.0, 3.7514929952977356001e-26, 1.5612552698899588511e-25, 6.2876136744924012601e+22),
    (49.5, 47.0, 0.054391002827335592933, 382817347.96091884507, 1.9134247490387921805e-11),
    (49.5, 300.0, 0.037154100144934658638, 7.5577008787425648082e+126, 2.1758389958711817704e-130),
    (49.5, 10000.0, 0.0072422498505877576372, 0.0, 0.0),
    (-0.5, 1.3, 0.18719328683465692896, 1.379228143693366715, 0.2995749088766500071),
    (-2.75, 0.8, 4.9444339435902524188, 4.1406047071728056643, 9.1559382907255208826),
    (-2.75, 9.0, 0.25331705094408454171, 702.70619049848697006, 0.000075663809805531170973),
    (-1.5, 30.0, 0.14318064368377218831, 752420533212.43152405, 2.2126121514878784459e-14),
];
